"""0/1 knapsack value profiles.

Three routes to the same answers:

* ``solve_knapsack_bellman``: textbook capacity sweep, O(n*T).
* ``solve_knapsack_td``: group items into weight classes, turn each class
  into a w-step concave profile (greedy prefix sums), and fold the classes
  with the fast stepped convolution.  Cost roughly O(D*T) for D distinct
  weights.
* ``solve_knapsack_value_domain``: the weight/value swap.  Track the
  minimum weight needed for each exact total value, fold per-value classes
  with convex min-plus cores, and read off the best value under budget.

All profiles are "at most this capacity" profiles: entry t is the best
value over weights <= t, hence monotone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import NEG_CODE, POS_CODE, POS_THRESH
from .concave_conv import conv_concave_raw, conv_kstep_raw
from .errors import ValidationError
from .profiles import ValueProfile

# One subset sum must stay far below the sentinel range.
_GUARD = 1 << 55


@dataclass(frozen=True)
class KnapsackInstance:
    """Validated 0/1 instance.

    Items with w > T never fit and are dropped; items with v == 0 change
    nothing and are dropped.  Zero-weight items are rejected unless
    ``lax=True``, in which case their value is collected into ``offset``
    (they are always taken).
    """

    weights: tuple[int, ...]
    values: tuple[int, ...]
    capacity: int
    offset: int = 0

    @classmethod
    def build(cls, items, capacity: int, *, lax: bool = False) -> "KnapsackInstance":
        if capacity < 0:
            raise ValidationError("capacity must be >= 0")
        ws: list[int] = []
        vs: list[int] = []
        offset = 0
        for idx, (w, v) in enumerate(items):
            w, v = int(w), int(v)
            if w < 0 or v < 0:
                raise ValidationError(f"item {idx}: weight and value must be >= 0")
            if w == 0:
                if v == 0:
                    continue
                if not lax:
                    raise ValidationError(
                        f"item {idx}: zero-weight item needs lax=True")
                offset += v
                continue
            if v == 0 or w > capacity:
                continue
            ws.append(w)
            vs.append(v)
        n = len(ws)
        top = (max(vs) if vs else 0) + (max(ws) if ws else 0)
        if n * top > _GUARD or capacity > _GUARD or offset > _GUARD:
            raise ValidationError("instance magnitudes exceed the 2**55 guard")
        return cls(tuple(ws), tuple(vs), capacity, offset)

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def distinct_weights(self) -> int:
        return len(set(self.weights))

    @property
    def max_weight(self) -> int:
        return max(self.weights) if self.weights else 0

    @property
    def max_value(self) -> int:
        return max(self.values) if self.values else 0


@dataclass(frozen=True)
class WeightClassProfile:
    """All items of one weight: q of them cost q*w and greedily take the q
    largest values, so the profile is w-step concave."""

    weight: int
    values_desc: tuple[int, ...]
    profile: ValueProfile


def greedy_class_profile(values, weight: int, capacity: int) -> WeightClassProfile:
    if weight < 1:
        raise ValidationError("class weight must be >= 1")
    vals = sorted((int(v) for v in values), reverse=True)
    if any(v < 0 for v in vals):
        raise ValidationError("class values must be >= 0")
    csum = np.zeros(len(vals) + 1, np.int64)
    np.cumsum(np.asarray(vals, np.int64), out=csum[1:])
    counts = np.minimum(np.arange(capacity + 1) // weight, len(vals))
    prof = ValueProfile.from_codes(csum[counts])
    return WeightClassProfile(weight, tuple(vals), prof)


def solve_knapsack_bellman(inst: KnapsackInstance) -> ValueProfile:
    T = inst.capacity
    s = np.zeros(T + 1, np.int64)
    for w, v in zip(inst.weights, inst.values):
        np.maximum(s[w:], s[:-w] + v, out=s[w:])
    if inst.offset:
        s += inst.offset
    return ValueProfile.from_codes(s)


def solve_knapsack_td(inst: KnapsackInstance) -> ValueProfile:
    T = inst.capacity
    by_weight: dict[int, list[int]] = {}
    for w, v in zip(inst.weights, inst.values):
        by_weight.setdefault(w, []).append(v)
    s = np.zeros(1, np.int64)
    for w in sorted(by_weight):
        cls = greedy_class_profile(by_weight[w], w, T)
        s = conv_kstep_raw(s, cls.profile.codes, w)[:T + 1]
    if s.shape[0] < T + 1:
        s = np.concatenate([s, np.full(T + 1 - s.shape[0], s[-1])])
    if inst.offset:
        s = s + inst.offset
    return ValueProfile.from_codes(s)


def _fold_value_class(m: np.ndarray, value: int, weights_asc: np.ndarray) -> np.ndarray:
    """Min-plus fold of one value class into the exact-value weight table.

    Taking q class items adds q*value and at least the q smallest weights,
    a convex cost curve; each residue of the value stride folds against it
    through the negated concave max-plus kernel.
    """
    csum = np.zeros(weights_asc.shape[0] + 1, np.int64)
    np.cumsum(weights_asc, out=csum[1:])
    neg_core = -csum
    out = m.copy()
    for r in range(min(value, m.shape[0])):
        sub = m[r::value]
        neg_sub = np.where(sub >= POS_THRESH, np.int64(NEG_CODE), -sub)
        conv = conv_concave_raw(neg_sub, neg_core)[:sub.shape[0]]
        out[r::value] = np.where(conv == NEG_CODE, np.int64(POS_CODE), -conv)
    return out


def min_weight_per_value(inst: KnapsackInstance) -> ValueProfile:
    """Exact-value minimum-weight table m[0..n*V]; TOP marks unreachable."""
    if inst.n == 0:
        return ValueProfile.from_codes(np.zeros(1, np.int64))
    U = inst.n * inst.max_value
    by_value: dict[int, list[int]] = {}
    for w, v in zip(inst.weights, inst.values):
        by_value.setdefault(v, []).append(w)
    m = np.full(U + 1, POS_CODE, np.int64)
    m[0] = 0
    for v in sorted(by_value):
        weights = np.sort(np.asarray(by_value[v], np.int64))
        m = _fold_value_class(m, v, weights)
    return ValueProfile.from_codes(m)


def solve_knapsack_value_domain(inst: KnapsackInstance) -> int:
    """Best value with total weight <= capacity, computed value-first."""
    m = min_weight_per_value(inst).codes
    feasible = np.flatnonzero(m <= inst.capacity)
    return int(feasible[-1]) + inst.offset
