"""Pure numpy implementations of the search hot kernels.

Deliberately self contained: nothing here imports the criteria module, so
the penalty evaluation inside the search exercises a code path independent
of the verification layer it is later checked against.
"""

from __future__ import annotations

import numpy as np


def expm_skew(k: np.ndarray) -> np.ndarray:
    """exp(k) for skew-Hermitian k, via the eigendecomposition of i*k."""
    w, v = np.linalg.eigh(1j * np.asarray(k, dtype=complex))
    return (v * np.exp(-1j * w)) @ v.conj().T


def pair_stats(p1: np.ndarray, u1: np.ndarray, p2: np.ndarray, u2: np.ndarray):
    """Order-effect magnitude and the four repeatability residuals.

    Returns (magnitude, r_adjacent_a, r_adjacent_b, r_aba, r_bab) where
    each residual is the Frobenius norm of the corresponding operator
    identity's defect.
    """
    m1 = u1 @ p1
    m2 = u2 @ p2
    r_aa_a = float(np.linalg.norm(p1 @ m1 - m1))
    r_aa_b = float(np.linalg.norm(p2 @ m2 - m2))
    g1 = u2 @ (p2 @ m1)
    g2 = u1 @ (p1 @ m2)
    r_aba = float(np.linalg.norm(p1 @ g1 - g1))
    r_bab = float(np.linalg.norm(p2 @ g2 - g2))
    c1 = m1.conj().T @ (p2 @ m1)
    c2 = m2.conj().T @ (p1 @ m2)
    d = c1 - c2
    d = (d + d.conj().T) / 2.0
    mag = 0.0 if d.shape[0] == 0 else float(np.max(np.abs(np.linalg.eigvalsh(d))))
    return mag, r_aa_a, r_aa_b, r_aba, r_bab
