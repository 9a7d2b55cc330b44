"""Concrete measurement pairs: the worked example, random families, the shift.

Random constructions draw from numpy Generators (PCG64 via
np.random.default_rng); passing the same seed reproduces the same matrices
byte for byte on a given platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .exceptions import DimensionMismatchError, NotUnitaryError, RankOutOfRangeError
from .linalg import DEFAULT_TOL, Subspace, Tolerances
from .measurement import InstancePair, Measurement


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def example_pair(u3: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> InstancePair:
    """The four-dimensional pair with a two-dimensional overlap.

    Question A projects onto span(e1, e2, e3) and its disturbance acts as
    the given 3x3 unitary there (identity on e4); question B projects onto
    span(e1, e2, e4) and disturbs nothing.  Both questions are adjacently
    repeatable and A-B-A repeatability holds for every choice of u3, yet
    question order matters whenever u3 moves the overlap off itself.
    """
    u = np.asarray(u3, dtype=complex)
    if u.shape != (3, 3):
        raise DimensionMismatchError(f"expected a 3x3 unitary, got shape {u.shape}")
    if not linalg.is_unitary(u, tol):
        raise NotUnitaryError("disturbance block is not unitary within eq_tol")
    p1 = np.diag([1.0, 1.0, 1.0, 0.0]).astype(complex)
    p2 = np.diag([1.0, 1.0, 0.0, 1.0]).astype(complex)
    u1 = np.eye(4, dtype=complex)
    u1[:3, :3] = u
    u2 = np.eye(4, dtype=complex)
    return InstancePair(
        a=Measurement(projector=p1, unitary=u1, label="A"),
        b=Measurement(projector=p2, unitary=u2, label="B"),
    )


def example_pair_theta(theta: float) -> InstancePair:
    """Rotation slice of the example: A's disturbance rotates e2 towards e3.

    The joint 'yes' probability from state e2 is cos(theta)^2 for A-then-B
    but 1 for B-then-A, so theta tunes the order effect from 0 to maximal.
    """
    c, s = np.cos(theta), np.sin(theta)
    u3 = np.array(
        [
            [1.0, 0.0, 0.0],
            [0.0, c, -s],
            [0.0, s, c],
        ],
        dtype=complex,
    )
    return example_pair(u3)


def random_unitary(dim: int, seed=None) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    if dim < 0:
        raise DimensionMismatchError("dimension must be nonnegative")
    rng = _rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    # fix the phase ambiguity of QR so the distribution is exactly Haar
    return q * (d / np.abs(d))


def random_projector(dim: int, rank: int, seed=None) -> np.ndarray:
    """Projector onto a Haar-random subspace of the given rank."""
    if not 0 <= rank <= dim:
        raise RankOutOfRangeError(f"rank {rank} out of range for dimension {dim}")
    q = random_unitary(dim, seed)
    f = q[:, :rank]
    return f @ f.conj().T


def random_unitary_preserving(sub: Subspace, seed=None, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Random unitary leaving the subspace (and its complement) invariant."""
    rng = _rng(seed)
    n, k = sub.ambient_dim, sub.dim
    w, v = linalg.hermitian_eig(np.eye(n, dtype=complex) - sub.projector, tol)
    comp = v[:, w > 0.5]
    inner = random_unitary(k, rng)
    outer = random_unitary(n - k, rng)
    return sub.frame @ inner @ sub.frame.conj().T + comp @ outer @ comp.conj().T


def _split_frames(dims: tuple[int, int, int, int], rng: np.random.Generator):
    shared_dim, a_dim, b_dim, out_dim = dims
    if shared_dim < 1:
        raise DimensionMismatchError("the overlap part must have dimension at least 1")
    if min(a_dim, b_dim, out_dim) < 0:
        raise DimensionMismatchError("part dimensions must be nonnegative")
    n = shared_dim + a_dim + b_dim + out_dim
    q = random_unitary(n, rng)
    edges = np.cumsum([0, shared_dim, a_dim, b_dim, out_dim])
    parts = [q[:, edges[i]:edges[i + 1]] for i in range(4)]
    return n, parts


def _assemble(blocks) -> np.ndarray:
    """Sum of frame @ unitary @ frame^H terms over perpendicular frames."""
    total = None
    for frame, u in blocks:
        term = frame @ u @ frame.conj().T
        total = term if total is None else total + term
    return total


def random_aba_pair(dims: tuple[int, int, int, int], seed=None) -> InstancePair:
    """Random pair satisfying both adjacent conditions and A-B-A repeatability.

    dims = (overlap, a_only, b_only, outside) fixes the geometry: the two
    ranges share an overlap part and their leftovers are perpendicular.
    A's disturbance mixes freely inside its own range (the order-effect
    source), B's preserves the overlap, so B-A-B generically fails.
    """
    rng = _rng(seed)
    shared_dim, a_dim, b_dim, out_dim = dims
    n, (f_shared, f_a, f_b, f_out) = _split_frames(dims, rng)
    p1 = _assemble([(np.hstack([f_shared, f_a]), np.eye(shared_dim + a_dim, dtype=complex))])
    p2 = _assemble([(np.hstack([f_shared, f_b]), np.eye(shared_dim + b_dim, dtype=complex))])
    range_a = np.hstack([f_shared, f_a])
    away_a = np.hstack([f_b, f_out])
    u1 = _assemble(
        [
            (range_a, random_unitary(shared_dim + a_dim, rng)),
            (away_a, random_unitary(b_dim + out_dim, rng)),
        ]
    )
    away_b = np.hstack([f_a, f_out])
    u2 = _assemble(
        [
            (f_shared, random_unitary(shared_dim, rng)),
            (f_b, random_unitary(b_dim, rng)),
            (away_b, random_unitary(a_dim + out_dim, rng)),
        ]
    )
    return InstancePair(
        a=Measurement(projector=p1, unitary=u1, label="A"),
        b=Measurement(projector=p2, unitary=u2, label="B"),
    )


def random_fully_repeatable_pair(dims: tuple[int, int, int, int], seed=None) -> InstancePair:
    """Random pair satisfying all four repeatability conditions.

    Both disturbances are block diagonal against (overlap, own leftover,
    rest), which is exactly the structure full repeatability forces; the
    construction therefore carries no order effect.
    """
    rng = _rng(seed)
    shared_dim, a_dim, b_dim, out_dim = dims
    n, (f_shared, f_a, f_b, f_out) = _split_frames(dims, rng)
    p1 = _assemble([(np.hstack([f_shared, f_a]), np.eye(shared_dim + a_dim, dtype=complex))])
    p2 = _assemble([(np.hstack([f_shared, f_b]), np.eye(shared_dim + b_dim, dtype=complex))])
    u1 = _assemble(
        [
            (f_shared, random_unitary(shared_dim, rng)),
            (f_a, random_unitary(a_dim, rng)),
            (np.hstack([f_b, f_out]), random_unitary(b_dim + out_dim, rng)),
        ]
    )
    u2 = _assemble(
        [
            (f_shared, random_unitary(shared_dim, rng)),
            (f_b, random_unitary(b_dim, rng)),
            (np.hstack([f_a, f_out]), random_unitary(a_dim + out_dim, rng)),
        ]
    )
    return InstancePair(
        a=Measurement(projector=p1, unitary=u1, label="A"),
        b=Measurement(projector=p2, unitary=u2, label="B"),
    )


@dataclass(frozen=True, eq=False)
class ShiftInstance:
    """Finite window of the weighted one-sided shift.

    The transformer maps e1 to amplitude * e2 and each later basis vector
    to its successor; the last one is mapped to zero because the window
    ends.  Its gram effect is diagonal with entries (|amplitude|^2, 1, ...,
    1, 0).
    """

    amplitude: complex
    size: int
    shift: np.ndarray
    effect: np.ndarray


def truncated_shift(amplitude: complex, size: int) -> ShiftInstance:
    """Build the finite shift window; size must be at least 3."""
    if size < 3:
        raise DimensionMismatchError("shift window needs size at least 3")
    a = complex(amplitude)
    m = np.zeros((size, size), dtype=complex)
    m[1, 0] = a
    for k in range(1, size - 1):
        m[k + 1, k] = 1.0
    return ShiftInstance(amplitude=a, size=size, shift=m, effect=m.conj().T @ m)


def absorption_residual(inst: ShiftInstance) -> float:
    """Frobenius norm of E M - M over the whole window.

    In any finite window this is exactly 1: the window's last basis vector
    lies in the range of M but is annihilated by E.  Only the untruncated
    infinite operator satisfies E M = M with a non-projector E.
    """
    return float(np.linalg.norm(inst.effect @ inst.shift - inst.shift))


def interior_absorption_residual(inst: ShiftInstance) -> float:
    """Frobenius norm of E M - M away from the truncation boundary.

    Drops the single column where the window edge bites (the action on the
    next-to-last basis vector); on every other basis vector the absorption
    identity holds exactly, which is the infinite-dimensional mechanism the
    window demonstrates.
    """
    defect = inst.effect @ inst.shift - inst.shift
    defect = defect.copy()
    defect[:, inst.size - 2] = 0.0
    return float(np.linalg.norm(defect))


def shift_to_json(inst: ShiftInstance) -> dict:
    return {
        "amplitude": [float(inst.amplitude.real), float(inst.amplitude.imag)],
        "size": inst.size,
        "M": linalg.encode_matrix(inst.shift),
        "E": linalg.encode_matrix(inst.effect),
    }
