"""Randomised verification suites for the measurement-theory predicates.

Each suite draws instances from a seeded generator, evaluates one of the
structural claims the library rests on, and reports how many cases held.
A suite passing means every sampled case satisfied its predicate at the
given tolerances; the worst observed residual is kept for the report.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import criteria, instances, linalg
from .exceptions import NotNestedError, PreconditionUnmetError
from .linalg import DEFAULT_TOL, Tolerances
from .measurement import Measurement, extract_unitary_factor


@dataclass(frozen=True, eq=False)
class SuiteResult:
    """Outcome of one randomised suite."""

    name: str
    cases: int
    failures: int
    worst_residual: float

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "cases": self.cases,
            "failures": self.failures,
            "worstResidual": self.worst_residual,
            "passed": self.passed,
        }


def _random_measurement(rng: np.random.Generator, dim: int) -> Measurement:
    rank = int(rng.integers(1, dim + 1))
    projector = instances.random_projector(dim, rank, rng)
    unitary = instances.random_unitary(dim, rng)
    return Measurement(projector=projector, unitary=unitary, label="A")


def _random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return psi / np.linalg.norm(psi)


def fixed_point_suite(
    cases: int = 500, seed: int = 0, tol: Tolerances = DEFAULT_TOL
) -> SuiteResult:
    """Certainty of an outcome is equivalent to the effect fixing the state.

    Each case draws a random measurement, one state inside the projector
    range (a certain state, which the effect must fix exactly) and one
    generic state, for which the booleans 'probability equals one' and
    'effect fixes the state' must agree.
    """
    rng = np.random.default_rng(seed)
    failures = 0
    worst = 0.0
    for _ in range(cases):
        dim = int(rng.integers(2, 9))
        meas = _random_measurement(rng, dim)
        effect = meas.effect
        w, v = linalg.hermitian_eig(meas.projector, tol)
        rank = int(np.sum(w > 0.5))
        coeffs = rng.standard_normal(rank) + 1j * rng.standard_normal(rank)
        inside = v[:, :rank] @ coeffs
        inside = inside / np.linalg.norm(inside)
        try:
            fixed = criteria.certain_state_is_fixed(effect, inside, tol)
        except PreconditionUnmetError:
            failures += 1
            continue
        worst = max(worst, float(np.linalg.norm(effect @ inside - inside)))
        if not fixed:
            failures += 1
            continue
        psi = _random_state(rng, dim)
        prob = float(np.real(np.vdot(effect @ psi, psi)))
        certain = abs(prob - 1.0) <= tol.prob_tol
        invariant = float(np.linalg.norm(effect @ psi - psi)) <= 1e-7
        if certain != invariant:
            failures += 1
    return SuiteResult(
        name="fixed-point", cases=cases, failures=failures, worst_residual=worst
    )


def gram_structure_suite(
    cases: int = 500, seed: int = 0, tol: Tolerances = DEFAULT_TOL
) -> SuiteResult:
    """Absorption implies a projector Gram matrix, never the reverse.

    Even-indexed draws build transformers from range-preserving unitaries,
    where absorption must hold and the Gram matrix must be a projector;
    odd-indexed draws scale a transformer strictly below norm one, which
    must break both.  Every draw also checks the one-way implication:
    absorption without a projector Gram matrix is a failure.
    """
    rng = np.random.default_rng(seed)
    failures = 0
    worst = 0.0
    for index in range(cases):
        dim = int(rng.integers(2, 9))
        if index % 2 == 0:
            rank = int(rng.integers(1, dim + 1))
            projector = instances.random_projector(dim, rank, rng)
            sub = linalg.Subspace.from_projector(projector, tol)
            unitary = instances.random_unitary_preserving(sub, rng, tol)
            transformer = unitary @ projector
            expected = (True, True)
        else:
            meas = _random_measurement(rng, dim)
            scale = 0.2 + 0.6 * rng.random()
            transformer = scale * meas.transformer
            expected = (False, False)
        check = criteria.transformer_gram_check(transformer, tol)
        if expected[0]:
            gram = transformer.conj().T @ transformer
            worst = max(worst, float(np.linalg.norm(gram @ transformer - transformer)))
        if check.absorbs and not check.gram_is_projector:
            failures += 1
        elif (check.absorbs, check.gram_is_projector) != expected:
            failures += 1
    return SuiteResult(
        name="gram-structure", cases=cases, failures=failures, worst_residual=worst
    )


def factor_round_trip_suite(
    cases: int = 200, seed: int = 0, tol: Tolerances = DEFAULT_TOL
) -> SuiteResult:
    """Transformers with projector Gram matrices split as unitary times projector.

    Builds the transformer as a product directly, re-extracts a unitary
    factor from the matrix alone, and demands the recomposition match with
    the factor unitary.
    """
    rng = np.random.default_rng(seed)
    failures = 0
    worst = 0.0
    for _ in range(cases):
        dim = int(rng.integers(2, 7))
        rank = int(rng.integers(1, dim + 1))
        projector = instances.random_projector(dim, rank, rng)
        unitary = instances.random_unitary(dim, rng)
        transformer = unitary @ projector
        factor, effect = extract_unitary_factor(transformer, tol)
        residual = float(np.linalg.norm(factor @ effect - transformer))
        worst = max(worst, residual)
        if residual > 100 * tol.eq_tol or not linalg.is_unitary(factor, tol):
            failures += 1
    return SuiteResult(
        name="factor-round-trip", cases=cases, failures=failures, worst_residual=worst
    )


def structural_suite(
    cases: int = 200, seed: int = 0, tol: Tolerances = DEFAULT_TOL
) -> SuiteResult:
    """Three-condition pairs force the shared-subspace structure.

    Pairs drawn to satisfy both same-question conditions and A-B-A must
    have commuting projectors, the second question's image of the first
    range collapsing onto the overlap, perpendicular leftover parts, and
    the second disturbance fixing the overlap.  The first disturbance is
    left free, which is exactly where the order effect survives.
    """
    rng = np.random.default_rng(seed)
    failures = 0
    worst = 0.0
    for _ in range(cases):
        dims = _random_dims(rng)
        pair = instances.random_aba_pair(dims, rng)
        residuals = (
            criteria.adjacent_repeatability(pair.a, tol).residual,
            criteria.adjacent_repeatability(pair.b, tol).residual,
            criteria.aba_repeatability(pair, tol).residual,
        )
        worst = max(worst, *residuals)
        if max(residuals) > 100 * tol.eq_tol:
            failures += 1
            continue
        report = criteria.structural_consequences(pair, tol)
        if not (
            report.commute.holds
            and report.image_equals_overlap.holds
            and report.overlap_fixed_by_b.holds
            and report.perpendicular.holds
        ):
            failures += 1
    return SuiteResult(
        name="structural", cases=cases, failures=failures, worst_residual=worst
    )


def full_repeatability_suite(
    cases: int = 100, seed: int = 0, tol: Tolerances = DEFAULT_TOL
) -> SuiteResult:
    """All four conditions kill the order effect.

    Pairs built to satisfy every repeatability condition must certify: the
    magnitude stays under the certificate bound, both compressions equal
    the overlap projector, leftovers are perpendicular, and each
    disturbance is block diagonal against its induced splitting.
    """
    rng = np.random.default_rng(seed)
    failures = 0
    worst = 0.0
    for _ in range(cases):
        dims = _random_dims(rng, low=3, high=6)
        pair = instances.random_fully_repeatable_pair(dims, rng)
        try:
            certificate = criteria.full_repeatability_certificate(pair, tol)
        except (NotNestedError, PreconditionUnmetError):
            failures += 1
            continue
        worst = max(worst, certificate.magnitude)
        if not certificate.passed:
            failures += 1
    return SuiteResult(
        name="full-repeatability", cases=cases, failures=failures, worst_residual=worst
    )


def _random_dims(
    rng: np.random.Generator, low: int = 3, high: int = 8
) -> tuple[int, int, int, int]:
    """Draw (shared, a_only, b_only, outside) dimensions with shared >= 1."""
    total = int(rng.integers(low, high + 1))
    shared = int(rng.integers(1, total - 1)) if total > 2 else 1
    rest = total - shared
    a_only = int(rng.integers(0, rest + 1))
    b_only = int(rng.integers(0, rest - a_only + 1))
    outside = rest - a_only - b_only
    return shared, a_only, b_only, outside


_SUITES = {
    "fixed-point": (fixed_point_suite, 500),
    "gram-structure": (gram_structure_suite, 500),
    "factor-round-trip": (factor_round_trip_suite, 200),
    "structural": (structural_suite, 200),
    "full-repeatability": (full_repeatability_suite, 100),
}


def run_all(
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
    scale: float = 1.0,
    cases: int | None = None,
) -> list[SuiteResult]:
    """Run every suite; cases overrides every suite's count, scale multiplies defaults."""
    results = []
    for suite, default_cases in _SUITES.values():
        count = cases if cases is not None else max(1, int(round(default_cases * scale)))
        results.append(suite(cases=count, seed=seed, tol=tol))
    return results
