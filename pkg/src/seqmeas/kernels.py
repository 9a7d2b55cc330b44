"""Backend selection for the search hot kernels.

The compiled extension is preferred when it imported cleanly; otherwise
the pure numpy fallback takes over with identical semantics.  Setting
SEQMEAS_PURE_PYTHON=1 in the environment forces the fallback, which the
benchmark uses to compare the two.
"""

from __future__ import annotations

import os

import numpy as _np

if os.environ.get("SEQMEAS_PURE_PYTHON"):
    from . import _fallback as _impl

    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _fallback as _impl

        BACKEND = "python"

def expm_skew(k):
    """exp(k) for a skew-Hermitian generator k."""
    return _impl.expm_skew(_np.ascontiguousarray(k, dtype=complex))


def pair_stats(p1, u1, p2, u2):
    """(magnitude, r_adjacent_a, r_adjacent_b, r_aba, r_bab) for a pair."""
    return _impl.pair_stats(
        _np.ascontiguousarray(p1, dtype=complex),
        _np.ascontiguousarray(u1, dtype=complex),
        _np.ascontiguousarray(p2, dtype=complex),
        _np.ascontiguousarray(u2, dtype=complex),
    )
