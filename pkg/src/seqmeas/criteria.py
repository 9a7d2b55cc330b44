"""Executable predicates for repeatability and question-order effects.

Each predicate returns the residual it measured alongside the boolean, so
callers can report how close a pair came to a condition rather than just
whether it crossed the tolerance.

Conditions on a pair (A, B) with transformers M_j = U_j P_j:

* adjacent repeatability of A:  P1 U1 P1 = U1 P1  (asking A twice in a row
  agrees with certainty);
* A-B-A repeatability:          P1 U2 P2 U1 P1 = U2 P2 U1 P1  (A still
  agrees after B intervened);
* B-A-B repeatability:          the mirror image;
* order effect:                 the compression P1 U1* P2 U1 P1 differs
  from P2 U2* P1 U2 P2, i.e. asking A then B and asking B then A assign
  different joint 'yes' probabilities to some state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import linalg
from .exceptions import PreconditionUnmetError
from .linalg import DEFAULT_TOL, Subspace, Tolerances
from .measurement import InstancePair, Measurement


class ConditionCheck(NamedTuple):
    holds: bool
    residual: float

    def to_json(self) -> dict:
        return {"holds": self.holds, "residual": self.residual}


class GramCheck(NamedTuple):
    absorbs: bool
    gram_is_projector: bool


def certain_state_is_fixed(effect: np.ndarray, state: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    """A state with certain outcome must be a fixed vector of the effect.

    Preconditions: effect is an effect operator, state is a unit vector and
    the outcome probability <E psi, psi> equals 1 within prob_tol.
    """
    e = np.asarray(effect, dtype=complex)
    psi = np.asarray(state, dtype=complex)
    if not linalg.is_effect(e, tol):
        raise PreconditionUnmetError("operator is not an effect")
    nrm = float(np.linalg.norm(psi))
    if abs(nrm - 1.0) > tol.prob_tol:
        raise PreconditionUnmetError(f"state is not normalised (norm {nrm:.6f})")
    prob = float(np.real(np.vdot(e @ psi, psi)))
    if prob < 1.0 - tol.prob_tol:
        raise PreconditionUnmetError(f"outcome is not certain (<E psi, psi> = {prob:.6f})")
    return bool(np.linalg.norm(e @ psi - psi) <= tol.eq_tol)


def transformer_gram_check(m: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> GramCheck:
    """Whether the gram effect absorbs the transformer, and whether it is a projector.

    absorbs means E m = m with E = m^H m.  In finite dimension absorption
    forces E to be a projector; the converse holds for the class of effects
    (every projector admits an absorbing transformer, e.g. m = E itself)
    but not for each individual m, so both flags are returned.
    """
    a = np.asarray(m, dtype=complex)
    e = a.conj().T @ a
    absorbs = bool(np.linalg.norm(e @ a - a) <= tol.eq_tol)
    return GramCheck(absorbs=absorbs, gram_is_projector=linalg.is_projector(e, tol))


def adjacent_repeatability(meas: Measurement, tol: Tolerances = DEFAULT_TOL) -> ConditionCheck:
    """Asking the same question twice in a row agrees with certainty."""
    m = meas.transformer
    residual = float(np.linalg.norm(meas.projector @ m - m))
    return ConditionCheck(residual <= tol.eq_tol, residual)


def aba_repeatability(pair: InstancePair, tol: Tolerances = DEFAULT_TOL) -> ConditionCheck:
    """A answered 'yes', then B answered 'yes': A still answers 'yes'."""
    g = pair.b.transformer @ pair.a.transformer
    residual = float(np.linalg.norm(pair.a.projector @ g - g))
    return ConditionCheck(residual <= tol.eq_tol, residual)


def bab_repeatability(pair: InstancePair, tol: Tolerances = DEFAULT_TOL) -> ConditionCheck:
    """Mirror image: B, then A, then B again."""
    g = pair.a.transformer @ pair.b.transformer
    residual = float(np.linalg.norm(pair.b.projector @ g - g))
    return ConditionCheck(residual <= tol.eq_tol, residual)


def order_effect_operator(pair: InstancePair) -> np.ndarray:
    """Hermitian difference of the two sequencing compressions.

    <D psi, psi> is the joint-'yes' probability of A-then-B minus that of
    B-then-A, so D = 0 exactly when question order never matters.
    """
    m1 = pair.a.transformer
    m2 = pair.b.transformer
    c1 = m1.conj().T @ (pair.b.projector @ m1)
    c2 = m2.conj().T @ (pair.a.projector @ m2)
    d = c1 - c2
    return (d + d.conj().T) / 2.0


def order_effect_magnitude(pair: InstancePair) -> float:
    """Largest joint-probability gap over all states: spectral norm of D."""
    d = order_effect_operator(pair)
    if d.shape[0] == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvalsh(d))))


@dataclass(frozen=True, eq=False)
class StructuralReport:
    """Structural consequences of the one-sided repeatability conditions.

    For pairs satisfying adjacent repeatability of both questions plus
    A-B-A repeatability, theory forces: commuting projectors, B's image of
    A's range collapsing onto the overlap, perpendicular leftover parts,
    and B's disturbance fixing the overlap.  A's disturbance fixing the
    overlap is forced only when B-A-B repeatability holds as well.
    """

    commute: ConditionCheck
    image_equals_overlap: ConditionCheck
    overlap_fixed_by_a: ConditionCheck
    overlap_fixed_by_b: ConditionCheck
    perpendicular: ConditionCheck
    overlap_dim: int

    def to_json(self) -> dict:
        return {
            "projectorsCommute": self.commute.to_json(),
            "imageEqualsOverlap": self.image_equals_overlap.to_json(),
            "overlapFixedByA": self.overlap_fixed_by_a.to_json(),
            "overlapFixedByB": self.overlap_fixed_by_b.to_json(),
            "perpendicular": self.perpendicular.to_json(),
            "overlapDim": self.overlap_dim,
        }


def _overlap_parts(pair: InstancePair, tol: Tolerances) -> tuple[Subspace, Subspace, Subspace]:
    shared = linalg.subspace_intersection(pair.a.projector, pair.b.projector, tol)
    a_only = linalg.relative_complement(pair.a.projector, shared, tol)
    b_only = linalg.relative_complement(pair.b.projector, shared, tol)
    return shared, a_only, b_only


def _range_projector(m: np.ndarray, tol: Tolerances) -> np.ndarray:
    w, s, _ = np.linalg.svd(m)
    rank = int(np.sum(s > tol.rank_tol))
    f = w[:, :rank]
    return f @ f.conj().T


def structural_consequences(pair: InstancePair, tol: Tolerances = DEFAULT_TOL) -> StructuralReport:
    """Report the structural facts for an arbitrary valid pair.

    Nothing is assumed about the pair; each item is measured and reported
    so tests can assert which consequences hold under which conditions.
    """
    p1, p2 = pair.a.projector, pair.b.projector
    u1, u2 = pair.a.unitary, pair.b.unitary
    shared, a_only, b_only = _overlap_parts(pair, tol)
    eye = np.eye(pair.dim, dtype=complex)

    commute_res = float(np.linalg.norm(p1 @ p2 - p2 @ p1))
    image_res = float(np.linalg.norm(_range_projector(p2 @ p1, tol) - shared.projector))
    away = eye - shared.projector
    fixed_a_res = float(np.linalg.norm(away @ u1 @ shared.projector))
    fixed_b_res = float(np.linalg.norm(away @ u2 @ shared.projector))
    perp_res = float(np.linalg.norm(a_only.projector @ b_only.projector))

    return StructuralReport(
        commute=ConditionCheck(commute_res <= tol.eq_tol, commute_res),
        image_equals_overlap=ConditionCheck(image_res <= tol.eq_tol, image_res),
        overlap_fixed_by_a=ConditionCheck(fixed_a_res <= tol.eq_tol, fixed_a_res),
        overlap_fixed_by_b=ConditionCheck(fixed_b_res <= tol.eq_tol, fixed_b_res),
        perpendicular=ConditionCheck(perp_res <= tol.eq_tol, perp_res),
        overlap_dim=shared.dim,
    )


@dataclass(frozen=True, eq=False)
class FullRepeatabilityCertificate:
    """Certificate that full repeatability excludes any order effect.

    Issued for pairs satisfying all four repeatability conditions within
    eq_tol.  Certifies, each within bound = 10 * eq_tol: the order-effect
    magnitude vanishes, both sequencing compressions equal the projector
    onto the overlap, the leftover parts are perpendicular, and each
    disturbance is block diagonal against (overlap, own leftover, rest).
    """

    bound: float
    magnitude: float
    compression_residual_a: float
    compression_residual_b: float
    perpendicular_residual: float
    coupling_residual_a: float
    coupling_residual_b: float
    overlap_dim: int

    @property
    def passed(self) -> bool:
        worst = max(
            self.magnitude,
            self.compression_residual_a,
            self.compression_residual_b,
            self.perpendicular_residual,
            self.coupling_residual_a,
            self.coupling_residual_b,
        )
        return worst <= self.bound

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "bound": self.bound,
            "magnitude": self.magnitude,
            "compressionResidualA": self.compression_residual_a,
            "compressionResidualB": self.compression_residual_b,
            "perpendicularResidual": self.perpendicular_residual,
            "couplingResidualA": self.coupling_residual_a,
            "couplingResidualB": self.coupling_residual_b,
            "overlapDim": self.overlap_dim,
        }


def _worst_off_block(u: np.ndarray, frames: list[np.ndarray]) -> float:
    worst = 0.0
    for i, fi in enumerate(frames):
        for j, fj in enumerate(frames):
            if i != j:
                worst = max(worst, float(np.linalg.norm(fi.conj().T @ u @ fj)))
    return worst


def full_repeatability_certificate(pair: InstancePair, tol: Tolerances = DEFAULT_TOL) -> FullRepeatabilityCertificate:
    """Check the no-order-effect consequences of full repeatability.

    Preconditions: adjacent repeatability of both questions, A-B-A and
    B-A-B repeatability, all within eq_tol; PreconditionUnmetError names
    the conditions that failed.
    """
    failures = []
    for name, check in (
        ("adjacent-A", adjacent_repeatability(pair.a, tol)),
        ("adjacent-B", adjacent_repeatability(pair.b, tol)),
        ("A-B-A", aba_repeatability(pair, tol)),
        ("B-A-B", bab_repeatability(pair, tol)),
    ):
        if not check.holds:
            failures.append(f"{name} (residual {check.residual:.3e})")
    if failures:
        raise PreconditionUnmetError("repeatability conditions failed: " + ", ".join(failures))

    p1, p2 = pair.a.projector, pair.b.projector
    u1, u2 = pair.a.unitary, pair.b.unitary
    shared, a_only, b_only = _overlap_parts(pair, tol)
    perp_res = float(np.linalg.norm(a_only.projector @ b_only.projector))

    m1 = pair.a.transformer
    m2 = pair.b.transformer
    comp_a = m1.conj().T @ (p2 @ m1)
    comp_b = m2.conj().T @ (p1 @ m2)
    comp_res_a = float(np.linalg.norm(comp_a - shared.projector))
    comp_res_b = float(np.linalg.norm(comp_b - shared.projector))

    n = pair.dim
    q = np.eye(n, dtype=complex) - shared.projector - a_only.projector - b_only.projector
    w, v = linalg.hermitian_eig(q, tol)
    outside = v[:, w > 0.5]
    rest_a = np.hstack([b_only.frame, outside])
    rest_b = np.hstack([a_only.frame, outside])
    coupling_a = _worst_off_block(u1, [shared.frame, a_only.frame, rest_a])
    coupling_b = _worst_off_block(u2, [shared.frame, b_only.frame, rest_b])

    return FullRepeatabilityCertificate(
        bound=10.0 * tol.eq_tol,
        magnitude=order_effect_magnitude(pair),
        compression_residual_a=comp_res_a,
        compression_residual_b=comp_res_b,
        perpendicular_residual=perp_res,
        coupling_residual_a=coupling_a,
        coupling_residual_b=coupling_b,
        overlap_dim=shared.dim,
    )


@dataclass(frozen=True, eq=False)
class CriteriaReport:
    """All repeatability checks plus the order-effect magnitude for a pair."""

    aa_a: ConditionCheck
    aa_b: ConditionCheck
    aba: ConditionCheck
    bab: ConditionCheck
    order_effect_magnitude: float
    commute: ConditionCheck
    perpendicular: ConditionCheck
    overlap_dim: int

    def to_json(self) -> dict:
        return {
            "aaA": self.aa_a.to_json(),
            "aaB": self.aa_b.to_json(),
            "aba": self.aba.to_json(),
            "bab": self.bab.to_json(),
            "orderEffectMagnitude": self.order_effect_magnitude,
            "projectorsCommute": self.commute.to_json(),
            "perpendicular": self.perpendicular.to_json(),
            "intersectionDim": self.overlap_dim,
        }


def criteria_report(pair: InstancePair, tol: Tolerances = DEFAULT_TOL) -> CriteriaReport:
    structure = structural_consequences(pair, tol)
    return CriteriaReport(
        aa_a=adjacent_repeatability(pair.a, tol),
        aa_b=adjacent_repeatability(pair.b, tol),
        aba=aba_repeatability(pair, tol),
        bab=bab_repeatability(pair, tol),
        order_effect_magnitude=order_effect_magnitude(pair),
        commute=structure.commute,
        perpendicular=structure.perpendicular,
        overlap_dim=structure.overlap_dim,
    )
