"""Row maxima of implicit totally monotone matrices.

The matrix is given by a callable oracle; entries may be BOTTOM.  For the
reduce/interpolate recursion to be exact the matrix must satisfy, for all
i < i' and j < j',

    A[i, j] + A[i', j'] >= A[i', j] + A[i, j']

(the inverse-Monge / total-monotonicity direction for row MAXIMA), with
BOTTOM entries laid out so that leftmost row argmaxima are still
monotone.  Ties resolve to the smallest column index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .errors import ValidationError
from .profiles import BOTTOM, ExtValue


@dataclass
class MatrixOracle:
    """Implicit matrix: eval(i, j) for 0 <= i < nrows, 0 <= j < ncols."""

    nrows: int
    ncols: int
    eval: Callable[[int, int], ExtValue]
    calls: int = field(default=0, repr=False)

    def entry(self, i: int, j: int) -> ExtValue:
        self.calls += 1
        return self.eval(i, j)


def _gt(v1: ExtValue, v2: ExtValue) -> bool:
    """Strictly better for a row maximum; BOTTOM loses every comparison."""
    if v1 is BOTTOM:
        return False
    if v2 is BOTTOM:
        return True
    return v1 > v2


def smawk_row_maxima(oracle: MatrixOracle) -> list[tuple[int, ExtValue]]:
    """Per row: (smallest argmax column, its value).

    Evaluates O(nrows + ncols) entries; the count is available afterwards
    on ``oracle.calls``.
    """
    n, m = oracle.nrows, oracle.ncols
    if n < 1 or m < 1:
        raise ValidationError("matrix must be non-empty")
    out: list[tuple[int, ExtValue] | None] = [None] * n
    _smawk(oracle, list(range(n)), list(range(m)), out)
    return out  # type: ignore[return-value]


def _smawk(oracle: MatrixOracle, rows: list[int], cols: list[int], out) -> None:
    # Reduce: keep a stack of columns that can still win some row.
    kept: list[int] = []
    for c in cols:
        while kept:
            r = rows[len(kept) - 1]
            if _gt(oracle.entry(r, c), oracle.entry(r, kept[-1])):
                kept.pop()
            else:
                break
        if len(kept) < len(rows):
            kept.append(c)
    if len(rows) == 1:
        r = rows[0]
        best = kept[0]
        bv = oracle.entry(r, best)
        for c in kept[1:]:
            v = oracle.entry(r, c)
            if _gt(v, bv):
                best, bv = c, v
        out[r] = (best, bv)
        return
    _smawk(oracle, rows[1::2], kept, out)
    # Interpolate even rows between the odd answers.
    ci = 0
    for t in range(0, len(rows), 2):
        r = rows[t]
        hi_col = out[rows[t + 1]][0] if t + 1 < len(rows) else kept[-1]
        best = kept[ci]
        bv = oracle.entry(r, best)
        pos = ci
        while True:
            c = kept[pos]
            if c != best:
                v = oracle.entry(r, c)
                if _gt(v, bv):
                    best, bv = c, v
            if c == hi_col:
                break
            pos += 1
        out[r] = (best, bv)
        ci = pos


def is_monge(oracle: MatrixOracle) -> bool:
    """Check every adjacent quadruple for the inequality above.

    Entries must be finite ints; BOTTOM raises ValidationError because the
    quadruple sums would be meaningless.
    """
    for i in range(oracle.nrows - 1):
        row_lo = [oracle.entry(i, j) for j in range(oracle.ncols)]
        row_hi = [oracle.entry(i + 1, j) for j in range(oracle.ncols)]
        for v in row_lo + row_hi:
            if not isinstance(v, int):
                raise ValidationError("is_monge needs finite integer entries")
        for j in range(oracle.ncols - 1):
            if row_lo[j] + row_hi[j + 1] < row_hi[j] + row_lo[j + 1]:
                return False
    return True
