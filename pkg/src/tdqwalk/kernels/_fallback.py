"""Pure numpy implementation of the stepping kernel.

Same contract as the compiled ``_step`` module; used when the extension is
not built or ``TDQWALK_BACKEND=python`` is set.
"""

from __future__ import annotations

import numpy as np

TINY = np.finfo(np.float64).tiny
FLUSH_EVERY = 16


def advance(src_p, src_m, dst_p, dst_m, lo, hi, u_pp, u_pm, u_mp, u_mm):
    n = src_p.shape[0]
    if src_m.shape[0] != n or dst_p.shape[0] != n or dst_m.shape[0] != n:
        raise ValueError("buffers must share one length")
    if lo < 1 or hi > n - 2 or (hi - lo) % 2 != 0:
        raise IndexError(f"site window [{lo}, {hi}] does not fit buffers of length {n}")
    out = slice(lo, hi + 1, 2)
    left = slice(lo - 1, hi, 2)
    right = slice(lo + 1, hi + 2, 2)
    np.add(u_pp * src_p[left], u_pm * src_m[left], out=dst_p[out])
    np.add(u_mp * src_p[right], u_mm * src_m[right], out=dst_m[out])
    # subnormal tails slow numpy down badly; flush them like the compiled core
    if (hi - lo) // 2 % FLUSH_EVERY == 0:
        for buf in (dst_p, dst_m):
            v = buf[lo:hi + 1].view(np.float64)
            v[np.abs(v) < TINY] = 0.0


def norm_sq(p, m, lo, hi):
    if lo < 0 or hi >= p.shape[0] or m.shape[0] != p.shape[0]:
        raise IndexError("window outside buffers")
    w = slice(lo, hi + 1)
    return float(np.vdot(p[w], p[w]).real + np.vdot(m[w], m[w]).real)
