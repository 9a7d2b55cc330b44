"""Dense complex linear algebra shared by every layer of the package.

Matrices are square numpy arrays of dtype complex128.  Frames carry
orthonormal columns and may have zero columns; zero-dimensional subspaces
are first class.  Every predicate takes an explicit tolerance set so the
caller controls strictness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    NotHermitianError,
    NotNestedError,
    NotPerpendicularError,
    NotProjectorError,
    NotSkewHermitianError,
    NotUnitaryError,
)


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used across the package.

    eq_tol bounds Frobenius-norm operator equalities, rank_tol is the
    eigenvalue cutoff for subspace extraction (and for treating a branch
    weight as zero), prob_tol bounds scalar probability comparisons.
    """

    eq_tol: float = 1e-9
    rank_tol: float = 1e-8
    prob_tol: float = 1e-9

    def __post_init__(self) -> None:
        if min(self.eq_tol, self.rank_tol, self.prob_tol) <= 0.0:
            raise ValueError("tolerances must be positive")

    def to_json(self) -> dict:
        return {"eqTol": self.eq_tol, "rankTol": self.rank_tol, "probTol": self.prob_tol}


DEFAULT_TOL = Tolerances()


def _as_complex(m: np.ndarray) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    return a


def is_hermitian(m: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = _as_complex(m)
    return bool(np.linalg.norm(a - a.conj().T) <= tol.eq_tol)


def is_unitary(u: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = _as_complex(u)
    eye = np.eye(a.shape[0], dtype=complex)
    return bool(np.linalg.norm(a @ a.conj().T - eye) <= tol.eq_tol)


def is_projector(p: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = _as_complex(p)
    if not is_hermitian(a, tol):
        return False
    return bool(np.linalg.norm(a @ a - a) <= tol.eq_tol)


def is_effect(e: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff e is Hermitian with spectrum inside [0, 1] up to eq_tol."""
    a = _as_complex(e)
    if not is_hermitian(a, tol):
        return False
    w = np.linalg.eigvalsh((a + a.conj().T) / 2.0)
    return bool(w.size == 0 or (w[0] >= -tol.eq_tol and w[-1] <= 1.0 + tol.eq_tol))


def svd_decompose(m: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full singular value decomposition m = w @ s @ v.conj().T.

    s is returned as a real diagonal matrix with nonnegative entries in
    descending order; w and v are unitary.
    """
    a = _as_complex(m)
    w, sing, vh = np.linalg.svd(a)
    return w, np.diag(sing).astype(complex), vh.conj().T


def hermitian_eig(h: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and eigenvector frame of a Hermitian matrix.

    Each eigenvector's phase is fixed by making its largest-magnitude
    component real and positive, so repeated runs produce identical frames.
    Ties in magnitude resolve to the first occurrence.
    """
    a = _as_complex(h)
    if not is_hermitian(a, tol):
        raise NotHermitianError("matrix is not Hermitian within eq_tol")
    w, v = np.linalg.eigh((a + a.conj().T) / 2.0)
    w = w[::-1].copy()
    v = v[:, ::-1].copy()
    for j in range(v.shape[1]):
        i = int(np.argmax(np.abs(v[:, j])))
        ph = v[i, j]
        mag = abs(ph)
        if mag > 0.0:
            v[:, j] *= ph.conjugate() / mag
    return w, v


def unitary_from_skew(k: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Matrix exponential of a skew-Hermitian generator, exactly unitary.

    Computed through the eigendecomposition of the Hermitian matrix i*k, so
    the result is unitary to machine precision rather than to the accuracy
    of a Pade approximation.
    """
    a = _as_complex(k)
    if np.linalg.norm(a + a.conj().T) > tol.eq_tol:
        raise NotSkewHermitianError("generator is not skew-Hermitian within eq_tol")
    w, v = np.linalg.eigh(1j * a)
    return (v * np.exp(-1j * w)) @ v.conj().T


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace carried as an orthonormal frame together with its projector."""

    frame: np.ndarray
    projector: np.ndarray

    @classmethod
    def from_frame(cls, frame: np.ndarray) -> "Subspace":
        f = np.asarray(frame, dtype=complex)
        if f.ndim != 2:
            raise DimensionMismatchError("frame must be a 2-d array of column vectors")
        return cls(frame=f, projector=f @ f.conj().T)

    @classmethod
    def from_projector(cls, p: np.ndarray, tol: "Tolerances" = None) -> "Subspace":
        t = DEFAULT_TOL if tol is None else tol
        a = _as_complex(p)
        if not is_projector(a, t):
            raise NotProjectorError("argument is not an orthogonal projector")
        w, v = hermitian_eig(a, t)
        return cls.from_frame(v[:, w > 0.5])

    @property
    def ambient_dim(self) -> int:
        return self.frame.shape[0]

    @property
    def dim(self) -> int:
        return self.frame.shape[1]


def subspace_intersection(p1: np.ndarray, p2: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Intersection of the ranges of two projectors.

    Extracted as the eigenspace of p1 + p2 at eigenvalue 2: a unit vector
    lies in both ranges exactly when both projectors leave it fixed, and
    rank_tol sets the cutoff.
    """
    a, b = _as_complex(p1), _as_complex(p2)
    for name, p in (("first", a), ("second", b)):
        if not is_projector(p, tol):
            raise NotProjectorError(f"{name} argument is not an orthogonal projector")
    if a.shape != b.shape:
        raise DimensionMismatchError("projectors act on different spaces")
    w, v = hermitian_eig(a + b, tol)
    keep = w >= 2.0 - tol.rank_tol
    return Subspace.from_frame(v[:, keep])


def relative_complement(p: np.ndarray, inner: Subspace, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Orthogonal complement of a nested subspace inside the range of p.

    Requires inner to sit inside ran(p); the difference p - P_inner is then
    itself a projector and its range is returned.
    """
    a = _as_complex(p)
    if not is_projector(a, tol):
        raise NotProjectorError("argument is not an orthogonal projector")
    q = inner.projector
    if np.linalg.norm(a @ q - q) > tol.eq_tol:
        raise NotNestedError("subspace is not contained in the projector range")
    w, v = hermitian_eig(a - q, tol)
    keep = w > 0.5  # difference of nested projectors has spectrum {0, 1}
    return Subspace.from_frame(v[:, keep])


@dataclass(frozen=True, eq=False)
class SubspaceDecomposition:
    """Splitting of the whole space induced by two projector ranges.

    shared is the intersection, a_only and b_only are the leftovers of the
    respective ranges, outside is everything orthogonal to all three.
    """

    shared: Subspace
    a_only: Subspace
    b_only: Subspace
    outside: Subspace

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return (self.shared.dim, self.a_only.dim, self.b_only.dim, self.outside.dim)


def four_way_decomposition(p1: np.ndarray, p2: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> SubspaceDecomposition:
    """Split the space into shared, a-only, b-only and outside parts.

    The two leftover parts must be perpendicular for the four frames to be
    an orthogonal decomposition; NotPerpendicularError reports when they
    are not (generic non-commuting projectors).
    """
    shared = subspace_intersection(p1, p2, tol)
    a_only = relative_complement(p1, shared, tol)
    b_only = relative_complement(p2, shared, tol)
    cross = np.linalg.norm(a_only.projector @ b_only.projector)
    if cross > tol.eq_tol:
        raise NotPerpendicularError(
            f"leftover parts are not perpendicular (residual {cross:.3e})"
        )
    n = shared.ambient_dim
    q = np.eye(n, dtype=complex) - shared.projector - a_only.projector - b_only.projector
    w, v = hermitian_eig(q, tol)
    outside = Subspace.from_frame(v[:, w > 0.5])
    total = shared.dim + a_only.dim + b_only.dim + outside.dim
    if total != n:
        raise DimensionMismatchError(
            f"decomposition dims sum to {total}, ambient dimension is {n}"
        )
    return SubspaceDecomposition(shared=shared, a_only=a_only, b_only=b_only, outside=outside)


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    """Outcome of testing a unitary against a frame partition.

    invariant is true when every off-block coupling is below eq_tol, and
    blocks then holds the diagonal blocks in partition order.  violations
    lists (i, j, magnitude) for each coupling above the tolerance, largest
    first, where magnitude is the Frobenius mass of frames[i]^H u frames[j].
    """

    invariant: bool
    blocks: tuple[np.ndarray, ...] | None
    violations: tuple[tuple[int, int, float], ...]


def block_decompose(u: np.ndarray, frames: Sequence[np.ndarray], tol: Tolerances = DEFAULT_TOL) -> BlockDecomposition:
    """Test whether a unitary is block diagonal against a frame partition."""
    a = _as_complex(u)
    if not is_unitary(a, tol):
        raise NotUnitaryError("operator is not unitary within eq_tol")
    mats = [np.asarray(f, dtype=complex) for f in frames]
    stacked = np.hstack(mats) if mats else np.zeros((a.shape[0], 0), dtype=complex)
    if stacked.shape != a.shape:
        raise DimensionMismatchError(
            f"frames supply {stacked.shape[1]} columns for ambient dimension {a.shape[0]}"
        )
    gram = stacked.conj().T @ stacked
    if np.linalg.norm(gram - np.eye(a.shape[0], dtype=complex)) > tol.eq_tol:
        raise DimensionMismatchError("frames do not form an orthonormal partition")
    blocks = [[fi.conj().T @ a @ fj for fj in mats] for fi in mats]
    violations = []
    for i in range(len(mats)):
        for j in range(len(mats)):
            if i == j:
                continue
            mag = float(np.linalg.norm(blocks[i][j]))
            if mag > tol.eq_tol:
                violations.append((i, j, mag))
    violations.sort(key=lambda item: -item[2])
    if violations:
        return BlockDecomposition(invariant=False, blocks=None, violations=tuple(violations))
    diag = tuple(blocks[i][i] for i in range(len(mats)))
    return BlockDecomposition(invariant=True, blocks=diag, violations=())


def encode_matrix(m: np.ndarray) -> list:
    """Row-major list of [re, im] pairs."""
    a = _as_complex(m)
    flat = a.reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def decode_matrix(data: Sequence, dim: int) -> np.ndarray:
    if dim < 0:
        raise DimensionMismatchError("dimension must be nonnegative")
    if len(data) != dim * dim:
        raise DimensionMismatchError(
            f"matrix encoding has {len(data)} entries, expected {dim * dim}"
        )
    out = np.empty(dim * dim, dtype=complex)
    for i, pair in enumerate(data):
        if len(pair) != 2:
            raise ValueError("matrix entries must be [re, im] pairs")
        out[i] = float(pair[0]) + 1j * float(pair[1])
    if not np.all(np.isfinite(out.view(float))):
        raise ValueError("matrix encoding contains non-finite values")
    return out.reshape(dim, dim)


def encode_vector(v: np.ndarray) -> list:
    a = np.asarray(v, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in a]


def decode_vector(data: Sequence, dim: int) -> np.ndarray:
    if len(data) != dim:
        raise DimensionMismatchError(f"vector encoding has {len(data)} entries, expected {dim}")
    out = np.empty(dim, dtype=complex)
    for i, pair in enumerate(data):
        if len(pair) != 2:
            raise ValueError("vector entries must be [re, im] pairs")
        out[i] = float(pair[0]) + 1j * float(pair[1])
    if not np.all(np.isfinite(out.view(float))):
        raise ValueError("vector encoding contains non-finite values")
    return out
