"""Brute-force reference computations used to cross-check the library.

Everything here is built from explicit matrix entries and per-step state
propagation, with no imports from the package under test.  Tests freeze
values produced by these routines and compare the library against them.
"""

from __future__ import annotations

import numpy as np


def rotation_pair_matrices(theta: float):
    """Projectors and unitaries of the built-in 4-dim example, entry by entry."""
    c, s = np.cos(theta), np.sin(theta)
    p1 = np.zeros((4, 4), dtype=complex)
    p2 = np.zeros((4, 4), dtype=complex)
    for i in (0, 1, 2):
        p1[i, i] = 1.0
    for i in (0, 1, 3):
        p2[i, i] = 1.0
    u1 = np.zeros((4, 4), dtype=complex)
    u1[0, 0] = 1.0
    u1[1, 1] = c
    u1[2, 1] = s
    u1[1, 2] = -s
    u1[2, 2] = c
    u1[3, 3] = 1.0
    u2 = np.eye(4, dtype=complex)
    return p1, u1, p2, u2


def chain_prob(steps, psi):
    """Joint probability of answering 'yes' at every step of the chain.

    Each step is a (P, U) pair applied as psi -> U P psi with no
    renormalisation; the joint probability is the final squared norm.
    """
    v = np.array(psi, dtype=complex)
    for p, u in steps:
        v = u @ (p @ v)
    return float(np.real(np.vdot(v, v)))


def conditional_prob(prefix, p_final, psi):
    """Probability of the final 'yes' given every prefix step answered 'yes'."""
    v = np.array(psi, dtype=complex)
    for p, u in prefix:
        v = u @ (p @ v)
        w = np.real(np.vdot(v, v))
        if w <= 1e-12:
            raise ZeroDivisionError("prefix branch has vanishing weight")
        v = v / np.sqrt(w)
    return float(np.real(np.vdot(p_final @ v, v)))


def order_gap_operator(p1, u1, p2, u2):
    """Difference of the two sequencing compressions, assembled entrywise."""
    n = p1.shape[0]
    m1 = u1 @ p1
    m2 = u2 @ p2
    d = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            acc = 0.0 + 0.0j
            for k in range(n):
                # <e_i, P1 U1* P2 U1 P1 e_j> accumulated via the middle index
                acc += np.vdot(m1[:, i], p2[:, k]) * m1[k, j]
                acc -= np.vdot(m2[:, i], p1[:, k]) * m2[k, j]
            d[i, j] = acc
    return d


def spectral_norm_hermitian(d):
    return float(np.max(np.abs(np.linalg.eigvalsh((d + d.conj().T) / 2))))


def sampled_order_gap(p1, u1, p2, u2, samples, seed):
    """Largest |p_AB - p_BA| seen over random unit states."""
    rng = np.random.default_rng(seed)
    n = p1.shape[0]
    best = 0.0
    for _ in range(samples):
        z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        psi = z / np.linalg.norm(z)
        pab = chain_prob([(p1, u1), (p2, u2)], psi)
        pba = chain_prob([(p2, u2), (p1, u1)], psi)
        best = max(best, abs(pab - pba))
    return best


def truncated_shift_matrices(a, n):
    """Finite window of the weighted shift, entry by entry."""
    m = np.zeros((n, n), dtype=complex)
    m[1, 0] = a
    for k in range(1, n - 1):
        m[k + 1, k] = 1.0
    e = m.conj().T @ m
    return m, e


def grid_gap_bound_dim2(steps):
    """Coarse grid over real rank-1 pairs in dim 2; lower bound for the gap."""
    best = 0.0
    angles = np.linspace(0.0, np.pi, steps, endpoint=False)
    for ta in angles:
        pa = np.array([[np.cos(ta) ** 2, np.cos(ta) * np.sin(ta)],
                       [np.cos(ta) * np.sin(ta), np.sin(ta) ** 2]], dtype=complex)
        for tb in angles:
            pb = np.array([[np.cos(tb) ** 2, np.cos(tb) * np.sin(tb)],
                           [np.cos(tb) * np.sin(tb), np.sin(tb) ** 2]], dtype=complex)
            for fa in angles:
                ua = np.array([[np.cos(fa), -np.sin(fa)],
                               [np.sin(fa), np.cos(fa)]], dtype=complex)
                for fb in angles:
                    ub = np.array([[np.cos(fb), -np.sin(fb)],
                                   [np.sin(fb), np.cos(fb)]], dtype=complex)
                    d = order_gap_operator(pa, ua, pb, ub)
                    best = max(best, spectral_norm_hermitian(d))
    return best
