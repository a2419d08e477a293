"""Fast max-plus convolution against concave and k-step concave sequences.

conv_concave runs the reduce/interpolate recursion on the implicit
inverse-Monge matrix E[i, j] = a[j] + b[i - j], so it costs O(|a| + |b|)
oracle-entry comparisons instead of the quadratic naive scan.

conv_kstep_concave lifts that to sequences that are concave on a stride-k
core and constant in between: split off the (constant) trailing partial
block, convolve each residue class of ``a`` against the full-block core,
re-interleave, and finish with width-k sliding maxima.
"""

from __future__ import annotations

import numpy as np

from ._kernels import (
    NEG_CODE,
    NEG_THRESH,
    POS_THRESH,
    conv_concave_codes,
    sliding_max_codes,
)
from .errors import NotConcaveError, ValidationError
from .profiles import (
    CONCAVE,
    ValueProfile,
    as_codes,
    check_concave,
    check_kstep_concave,
)


def _reject_top(codes: np.ndarray, side: str) -> None:
    if np.any(codes >= POS_THRESH):
        raise ValidationError(f"max-plus operand {side} cannot contain TOP")


def _core_bounds(codes: np.ndarray) -> tuple[int, int]:
    """(first, last) finite index; (-1, -1) when everything is BOTTOM."""
    idx = np.flatnonzero(codes > NEG_THRESH)
    if idx.shape[0] == 0:
        return (-1, -1)
    return (int(idx[0]), int(idx[-1]))


def conv_concave_raw(ac: np.ndarray, bc: np.ndarray) -> np.ndarray:
    """Code-level conv for pre-validated operands (b concave)."""
    p, q = _core_bounds(bc)
    if p < 0 or ac.shape[0] == 0:
        return np.full(ac.shape[0] + bc.shape[0] - 1, NEG_CODE, np.int64)
    return conv_concave_codes(ac, bc, p, q)


def conv_concave(a, b) -> ValueProfile:
    """Max-plus convolution where b is concave (BOTTOM prefix/suffix ok)."""
    ac = as_codes(a)
    bc = as_codes(b)
    _reject_top(ac, "a")
    _reject_top(bc, "b")
    witness = check_concave(ValueProfile.from_codes(bc.copy()))
    if witness.kind != CONCAVE:
        raise NotConcaveError(f"b is not concave: {witness}", witness=witness)
    return ValueProfile.from_codes(conv_concave_raw(ac, bc))


def conv_kstep_raw(ac: np.ndarray, bc: np.ndarray, k: int) -> np.ndarray:
    """Code-level k-step conv for pre-validated operands."""
    la = int(ac.shape[0])
    nb = int(bc.shape[0])
    out_len = la + nb - 1
    out = np.full(out_len, NEG_CODE, np.int64)

    last_core = ((nb - 1) // k) * k
    # Full blocks: cores 0, k, ..., last_core-k convolve each residue class.
    ncores = last_core // k
    if ncores >= 1:
        y = np.ascontiguousarray(bc[0:last_core:k])
        scratch = np.full(out_len + k, NEG_CODE, np.int64)
        for r in range(min(k, la)):
            x = np.ascontiguousarray(ac[r::k])
            c = conv_concave_raw(x, y)
            scratch[r:r + c.shape[0] * k:k] = c
        win = sliding_max_codes(scratch[:out_len], k)
        np.maximum(out, win, out=out)

    # Trailing block: entries bc[last_core .. nb-1] all equal bc[last_core].
    tv = int(bc[last_core])
    if tv > NEG_THRESH:
        width = nb - last_core
        padded = np.full(la + width - 1, NEG_CODE, np.int64)
        padded[:la] = ac
        sm = sliding_max_codes(padded, width)
        contrib = np.where(sm <= NEG_THRESH, np.int64(NEG_CODE), sm + tv)
        seg = out[last_core:]
        np.maximum(seg, contrib, out=seg)
    return out


def conv_kstep_concave(a, b, k: int) -> ValueProfile:
    """Max-plus convolution where b is k-step concave."""
    if k < 1:
        raise ValidationError("stride k must be >= 1")
    ac = as_codes(a)
    bc = as_codes(b)
    _reject_top(ac, "a")
    _reject_top(bc, "b")
    witness = check_kstep_concave(ValueProfile.from_codes(bc.copy()), k)
    if witness.kind != CONCAVE:
        raise NotConcaveError(f"b is not {k}-step concave: {witness}",
                              witness=witness)
    return ValueProfile.from_codes(conv_kstep_raw(ac, bc, k))


def sliding_window_max(f, k: int) -> ValueProfile:
    """out[j] = max(f[max(0, j-k+1) .. j]) (window clamped at the left edge)."""
    if k < 1:
        raise ValidationError("window width must be >= 1")
    fc = as_codes(f)
    _reject_top(fc, "f")
    return ValueProfile.from_codes(sliding_max_codes(fc, k))
