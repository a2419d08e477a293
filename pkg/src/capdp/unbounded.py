"""Unbounded knapsack: any item may repeat.

The interesting regime is huge capacity.  Three fast routes:

* ``solve_unbounded_doubling``: capacity halving.  The best-value window
  of width about 2*M around capacity c can be squared (max-plus with
  itself) to get the window around 2c, because some optimal multiset for
  weight near 2c splits into two halves whose weights land within M-1 of
  each other.  Walk the halving schedule T, ceil(T/2), ... down to the
  base window, then square back up: O(M^2 log T) with no direct
  dependence on T.
* ``solve_unbounded_steinitz``: once capacity exceeds M^2 the best
  value-density item fills everything except a remainder below M^2; commit
  enough copies of it and finish with the doubling route on the rest.
* ``solve_unbounded_value_domain``: value-side dual.  Some optimum is the
  density champion repeated, except for at most V other item copies; track
  minimum weight per added value over a window of width about V^2.

``solve_unbounded_dp`` is the O(n*T) reference sweep.

All answers are at-most-capacity values (monotone in T).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import naive_maxplus_codes, naive_minplus_codes, unbounded_fill_dp, POS_CODE
from .errors import ValidationError, guard_cells
from .profiles import ValueProfile

_GUARD = 1 << 55
_DP_CELL_LIMIT = 200_000_000


@dataclass(frozen=True)
class UnboundedInstance:
    """Validated instance: positive weights, one item per weight (only the
    best value at a weight can matter), weights above capacity dropped."""

    weights: tuple[int, ...]
    values: tuple[int, ...]
    capacity: int

    @classmethod
    def build(cls, items, capacity: int) -> "UnboundedInstance":
        if capacity < 0:
            raise ValidationError("capacity must be >= 0")
        best: dict[int, int] = {}
        for idx, (w, v) in enumerate(items):
            w, v = int(w), int(v)
            if w <= 0:
                raise ValidationError(f"item {idx}: weight must be >= 1")
            if v < 0:
                raise ValidationError(f"item {idx}: value must be >= 0")
            if v == 0 or w > capacity:
                continue
            if v > best.get(w, -1):
                best[w] = v
        ws = tuple(sorted(best))
        vs = tuple(best[w] for w in ws)
        if ws:
            dens = max(capacity // min(ws) + 1, 1) * max(vs)
            if dens > _GUARD or capacity > _GUARD:
                raise ValidationError("instance magnitudes exceed the 2**55 guard")
        return cls(ws, vs, capacity)

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def max_weight(self) -> int:
        return max(self.weights) if self.weights else 0

    @property
    def max_value(self) -> int:
        return max(self.values) if self.values else 0


@dataclass(frozen=True)
class DensityChampion:
    index: int
    weight: int
    value: int


def density_champion(inst: UnboundedInstance) -> DensityChampion:
    """Best value/weight ratio; ties go to the smaller weight."""
    if inst.n == 0:
        raise ValidationError("instance has no usable items")
    bi = 0
    for i in range(1, inst.n):
        # v_i / w_i > v_b / w_b without division
        lhs = inst.values[i] * inst.weights[bi]
        rhs = inst.values[bi] * inst.weights[i]
        if lhs > rhs or (lhs == rhs and inst.weights[i] < inst.weights[bi]):
            bi = i
    return DensityChampion(bi, inst.weights[bi], inst.values[bi])


def _base_ext(inst: UnboundedInstance) -> np.ndarray:
    """Exact at-most values for capacities 0..2M (enough to seed squaring)."""
    M = inst.max_weight
    hi = 2 * M
    guard_cells((hi + 1) ** 2 * max(hi, 1).bit_length(), _DP_CELL_LIMIT,
                "base window squaring (quadratic in the heaviest weight)")
    cur = np.zeros(hi + 1, np.int64)
    for w, v in zip(inst.weights, inst.values):
        if v > cur[w]:
            cur[w] = v
    np.maximum.accumulate(cur, out=cur)
    rounds = max(hi, 1).bit_length()
    for _ in range(rounds):
        cur = naive_maxplus_codes(cur, cur)[:hi + 1]
        np.maximum.accumulate(cur, out=cur)
    return cur


def base_window(inst: UnboundedInstance) -> ValueProfile:
    """At-most value profile for capacities 0..M (M = heaviest item)."""
    if inst.n == 0:
        return ValueProfile.from_codes(np.zeros(1, np.int64))
    return ValueProfile.from_codes(_base_ext(inst)[:inst.max_weight + 1])


def solve_unbounded_dp(inst: UnboundedInstance) -> ValueProfile:
    """Reference O(n*T) sweep over every capacity."""
    if inst.n == 0:
        return ValueProfile.from_codes(np.zeros(inst.capacity + 1, np.int64))
    guard_cells(inst.n * (inst.capacity + 1), _DP_CELL_LIMIT,
                "capacity reference sweep")
    ws = np.asarray(inst.weights, np.int64)
    vs = np.asarray(inst.values, np.int64)
    return ValueProfile.from_codes(unbounded_fill_dp(ws, vs, inst.capacity))


def solve_unbounded_doubling(inst: UnboundedInstance, *,
                             with_window: bool = False):
    """Best value at full capacity via window squaring along the halving
    schedule; cost is independent of T beyond its bit length.

    With ``with_window=True`` returns ``(value, lo, window)`` where
    ``window`` holds the final at-most values for capacities ``lo..T``.
    """
    value, lo, codes = _doubling_impl(inst)
    if with_window:
        return value, lo, ValueProfile.from_codes(codes)
    return value


def _doubling_impl(inst: UnboundedInstance) -> tuple[int, int, np.ndarray]:
    T = inst.capacity
    if inst.n == 0:
        return 0, T, np.zeros(1, np.int64)
    M = inst.max_weight
    base = _base_ext(inst)
    if T <= 2 * M:
        lo0 = max(0, T - M - 1)
        return int(base[T]), lo0, base[lo0:T + 1].copy()
    caps = [T]
    while caps[-1] > M:
        caps.append((caps[-1] + 1) // 2)
    guard_cells((2 * M + 2) ** 2 * len(caps), _DP_CELL_LIMIT,
                "window squaring schedule")
    # Window invariant: H covers absolute capacities lo..c with
    # lo = max(0, c - M - 1), holding exact at-most values.
    c = caps[-1]
    lo = max(0, c - M - 1)
    ext = base[lo:c + M + 1].copy()
    for level in range(len(caps) - 2, -1, -1):
        c_next = caps[level]
        sq = naive_maxplus_codes(ext, ext)
        sq_lo = 2 * lo
        lo_next = max(0, c_next - M - 1)
        h = sq[lo_next - sq_lo:c_next + 1 - sq_lo]
        if level == 0:
            return int(h.max()), lo_next, h.copy()
        ext = naive_maxplus_codes(h, base)[:c_next + M + 1 - lo_next]
        lo = lo_next
    raise AssertionError("halving schedule was empty")


def solve_unbounded_steinitz(inst: UnboundedInstance) -> int:
    """Commit density-champion copies until the remaining capacity is at
    most M^2, then finish with the doubling route."""
    T = inst.capacity
    if inst.n == 0:
        return 0
    M = inst.max_weight
    if T <= M * M:
        return solve_unbounded_doubling(inst)
    champ = density_champion(inst)
    copies = -((M * M - T) // champ.weight)  # ceil((T - M^2) / w)
    rem = T - copies * champ.weight
    rest = UnboundedInstance.build(list(zip(inst.weights, inst.values)), rem)
    return copies * champ.value + solve_unbounded_doubling(rest)


def solve_unbounded_value_domain(inst: UnboundedInstance) -> int:
    """Value-side dual: minimum weight per added value around a committed
    block of density-champion copies."""
    T = inst.capacity
    if inst.n == 0:
        return 0
    V = inst.max_value
    champ = density_champion(inst)
    k = T // champ.weight + 1
    base_count = max(0, k - V)
    v0 = base_count * champ.value
    w0 = base_count * champ.weight
    width = k * champ.value - v0
    guard_cells((width + 1) ** 2 * max(width, 1).bit_length(), _DP_CELL_LIMIT,
                "value table squaring (quadratic in the value range)")
    m = np.full(width + 1, POS_CODE, np.int64)
    m[0] = 0
    for w, v in zip(inst.weights, inst.values):
        hi = min(v, width)
        seg = m[1:hi + 1]
        np.minimum(seg, w, out=seg)
    rounds = max(width, 1).bit_length()
    for _ in range(rounds):
        m = naive_minplus_codes(m, m)[:width + 1]
    feasible = np.flatnonzero(m <= T - w0)
    return v0 + int(feasible[-1])
