"""Hop-bounded best paths when edge weights satisfy the Monge inequality.

On a DAG over nodes 0..n with all edges pointing up the index order and
weights obeying weight(i,j) + weight(i+1,j+1) >= weight(i+1,j) +
weight(i,j+1), the best value achievable with exactly k edges is concave
in k for any fixed endpoint pair.  That turns hop-budget queries into an
edge-penalized binary search: each probe is a single longest-path sweep
with a constant subtracted per edge, and the budgeted answer is read off
the penalized optimum.  The all-k and all-targets variants reuse probe
sweeps across outputs instead of searching from scratch per entry.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from ._kernels import (
    NEG_CODE,
    monge_dense_hop_dp,
    monge_dense_probe,
    monge_edge_hop_dp,
    monge_edge_probe,
)
from .dag import HopProfile
from .errors import (
    ConcavityViolationError,
    InfeasibleError,
    ValidationError,
    guard_cells,
)
from .profiles import BOTTOM, ValueProfile
from .rng import SplitMix64
from .smawk import MatrixOracle

_WEIGHT_GUARD = 1 << 55
_DP_CELL_LIMIT = 200_000_000


class MongeDagOracle:
    """Edge-weighted DAG on nodes 0..n, every edge i -> j with i < j.

    Complete oracles carry a full (n+1) x (n+1) weight matrix and every
    i < j pair is an edge; edge-listed oracles carry an explicit triple
    list.  weight_bound tracks max |weight| over usable edges.
    """

    __slots__ = ("n", "complete", "_W", "_indptr", "_csrc", "_cwts",
                 "weight_bound", "__dict__")

    def __init__(self):
        raise ValidationError(
            "use MongeDagOracle.from_matrix or MongeDagOracle.from_edges")

    @classmethod
    def _blank(cls) -> "MongeDagOracle":
        return object.__new__(cls)

    @classmethod
    def from_matrix(cls, matrix) -> "MongeDagOracle":
        try:
            W0 = np.asarray(matrix)
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"bad weight matrix: {exc}") from None
        if W0.dtype.kind not in "iu":
            raise ValidationError("weights must be integers")
        W = W0.astype(np.int64)
        if W.ndim != 2 or W.shape[0] != W.shape[1]:
            raise ValidationError("weight matrix must be square")
        if W.shape[0] < 2:
            raise ValidationError("need at least two nodes")
        g = cls._blank()
        g.n = int(W.shape[0]) - 1
        g.complete = True
        g._W = np.ascontiguousarray(W)
        g._W.setflags(write=False)
        g._indptr = None
        g._csrc = None
        g._cwts = None
        iu = np.triu_indices(g.n + 1, k=1)
        g.weight_bound = int(np.abs(W[iu]).max())
        _guard_scale(g.n, g.weight_bound)
        return g

    @classmethod
    def from_edges(cls, n: int, edges) -> "MongeDagOracle":
        if n < 1:
            raise ValidationError("need at least two nodes")
        triples = [(int(u), int(v), int(w)) for u, v, w in edges]
        src = np.fromiter((u for u, _, _ in triples), np.int64, len(triples))
        dst = np.fromiter((v for _, v, _ in triples), np.int64, len(triples))
        wts = np.fromiter((w for _, _, w in triples), np.int64, len(triples))
        if src.shape[0]:
            if int(src.min()) < 0 or int(dst.max()) > n:
                raise ValidationError("edge endpoint out of range")
            if not np.all(src < dst):
                raise ValidationError("edges must satisfy u < v")
            key = src * (n + 1) + dst
            if np.unique(key).shape[0] != key.shape[0]:
                raise ValidationError("duplicate edge")
            if int(np.abs(wts).max()) > _WEIGHT_GUARD:
                raise ValidationError("weights exceed the 2**55 guard")
        g = cls._blank()
        g.n = n
        g.complete = False
        g._W = None
        order = np.argsort(dst, kind="stable")
        counts = np.bincount(dst, minlength=n + 1)
        indptr = np.zeros(n + 2, np.int64)
        np.cumsum(counts, out=indptr[1:])
        g._indptr = indptr
        g._csrc = np.ascontiguousarray(src[order])
        g._cwts = np.ascontiguousarray(wts[order])
        g.weight_bound = int(np.abs(wts).max()) if wts.shape[0] else 0
        _guard_scale(n, g.weight_bound)
        return g

    @property
    def m(self) -> int:
        if self.complete:
            return (self.n + 1) * self.n // 2
        return int(self._csrc.shape[0])

    def weight(self, i: int, j: int):
        """Weight of edge i -> j; BOTTOM when the edge is absent."""
        if not (0 <= i < j <= self.n):
            raise ValidationError("weight is defined for 0 <= i < j <= n")
        if self.complete:
            return int(self._W[i, j])
        return self._out_adj.get(i, {}).get(j, BOTTOM)

    @cached_property
    def _out_adj(self) -> dict[int, dict[int, int]]:
        adj: dict[int, dict[int, int]] = {}
        for v in range(self.n + 1):
            for e in range(self._indptr[v], self._indptr[v + 1]):
                adj.setdefault(int(self._csrc[e]), {})[v] = int(self._cwts[e])
        return adj

    def successors(self, u: int):
        """(v, weight) pairs for edges out of u, ascending v."""
        if self.complete:
            return [(v, int(self._W[u, v])) for v in range(u + 1, self.n + 1)]
        return sorted(self._out_adj.get(u, {}).items())

    def matrix_oracle(self) -> MatrixOracle:
        """Counting matrix view for Monge validation; complete only."""
        if not self.complete:
            raise ValidationError("matrix view needs a complete oracle")
        W = self._W
        return MatrixOracle(self.n + 1, self.n + 1,
                            lambda i, j: int(W[i, j]))


def _guard_scale(n: int, bound: int) -> None:
    if bound > _WEIGHT_GUARD:
        raise ValidationError("weights exceed the 2**55 guard")
    n1 = n + 1
    if (2 * n1 * n1 + n1) * max(bound, 1) > 1 << 60:
        raise ValidationError(
            "n^2 * max|weight| too large for exact penalized sweeps")


def _check_pair(g: MongeDagOracle, s: int, t: int) -> None:
    if not (0 <= s <= g.n and 0 <= t <= g.n):
        raise ValidationError("endpoint out of range")
    if s == t:
        raise ValidationError("start and target must differ")
    if s > t:
        raise InfeasibleError("target precedes start in the index order")


class _EdgePenaltySearch:
    """Memoized penalized sweeps from a fixed start node."""

    def __init__(self, g: MongeDagOracle, s: int):
        self.g = g
        self.s = s
        self.memo: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    def __call__(self, lam: int):
        hit = self.memo.get(lam)
        if hit is None:
            if self.g.complete:
                hit = monge_dense_probe(self.g._W, lam, self.s)
            else:
                hit = monge_edge_probe(self.g._indptr, self.g._csrc,
                                       self.g._cwts, lam, self.s)
            self.memo[lam] = hit
        return hit

    @property
    def count(self) -> int:
        return len(self.memo)


def _penalty_bracket(g: MongeDagOracle) -> int:
    return 2 * (g.n + 1) * max(1, g.weight_bound)


def _bisect_atmost(probe: _EdgePenaltySearch, t: int, k: int, B: int) -> int:
    """Best value over paths to t with at most k edges.

    Callers must have established that t is reachable and that some path
    fits the budget (k >= min hops).
    """
    val0, kmin0, _ = probe(0)
    if int(kmin0[t]) <= k:
        return int(val0[t])
    lo, hi = 1, B
    while lo < hi:
        mid = (lo + hi) // 2
        if int(probe(mid)[1][t]) <= k:
            hi = mid
        else:
            lo = mid + 1
    val, kmin, kmax = probe(lo)
    if not (int(kmin[t]) <= k <= int(kmax[t])):
        raise ConcavityViolationError(
            f"hop profile is not concave near k={k}: penalty {lo} covers "
            f"[{int(kmin[t])}, {int(kmax[t])}]")
    return int(val[t]) + lo * k


def monge_best_path(g: MongeDagOracle, s: int, t: int, k: int) -> int:
    """Max s -> t value using at most k edges; O(m log(n * bound)).

    Exact whenever the exact-hop profile for (s, t) is concave, which
    Monge-complete oracles guarantee.  Edge-listed subgraphs can break
    that premise; detected breakdowns raise ConcavityViolationError and
    undetected ones can only overshoot (the concave-hull value), never
    undershoot.  monge_dp_profile is the premise-free reference.
    """
    _check_pair(g, s, t)
    if k < 1:
        raise ValidationError("edge budget must be >= 1")
    probe = _EdgePenaltySearch(g, s)
    B = _penalty_bracket(g)
    valB, kminB, _ = probe(B)
    if valB[t] == NEG_CODE:
        raise InfeasibleError("target unreachable")
    if int(kminB[t]) > k:
        raise InfeasibleError(
            f"every path to the target uses at least {int(kminB[t])} edges, "
            f"budget is {k}")
    return _bisect_atmost(probe, t, k, B)


def monge_all_k(g: MongeDagOracle, s: int, t: int) -> HopProfile:
    """Exact- and at-most-k values for every k in [0, n] at once.

    Walks the penalty axis divide-and-conquer style: each probed penalty
    pins the profile on the hop interval its optima cover, and the
    recursion only descends into uncovered gaps, so the number of sweeps
    tracks the profile's breakpoint count rather than n.
    """
    _check_pair(g, s, t)
    probe = _EdgePenaltySearch(g, s)
    B = _penalty_bracket(g)
    exact = np.full(g.n + 1, NEG_CODE, np.int64)
    valB, _, _ = probe(B)
    if valB[t] == NEG_CODE:
        return HopProfile.from_exact(ValueProfile.from_codes(exact))

    def cover(lam: int) -> tuple[int, int]:
        val, kmin, kmax = probe(lam)
        a, b = int(kmin[t]), int(kmax[t])
        vals = int(val[t]) + lam * np.arange(a, b + 1, dtype=np.int64)
        seg = exact[a:b + 1]
        clash = (seg != NEG_CODE) & (seg != vals)
        if clash.any():
            raise ConcavityViolationError(
                "penalized optima disagree on overlapping hop counts")
        exact[a:b + 1] = vals
        return a, b

    cover(B)
    cover(-B)
    stack = [(-B, B)]
    while stack:
        lam_lo, lam_hi = stack.pop()
        _, low_top = cover(lam_hi)
        high_bot, _ = cover(lam_lo)
        if high_bot - low_top <= 1:
            continue
        if lam_hi - lam_lo <= 1:
            raise ConcavityViolationError(
                f"hop profile is not concave: no penalty covers hop counts "
                f"{low_top + 1}..{high_bot - 1}")
        mid = (lam_lo + lam_hi) // 2
        cover(mid)
        stack.append((lam_lo, mid))
        stack.append((mid, lam_hi))
    return HopProfile.from_exact(ValueProfile.from_codes(exact))


def monge_all_targets(g: MongeDagOracle, s: int, k: int) -> ValueProfile:
    """Best at-most-k-edge value from s to every node; unreachable or
    over-budget targets come back BOTTOM, the start itself 0."""
    if not (0 <= s <= g.n):
        raise ValidationError("endpoint out of range")
    if k < 1:
        raise ValidationError("edge budget must be >= 1")
    probe = _EdgePenaltySearch(g, s)
    B = _penalty_bracket(g)
    out = np.full(g.n + 1, NEG_CODE, np.int64)
    out[s] = 0
    valB, kminB, _ = probe(B)
    for t in range(s + 1, g.n + 1):
        if valB[t] == NEG_CODE or int(kminB[t]) > k:
            continue
        out[t] = _bisect_atmost(probe, t, k, B)
    return ValueProfile.from_codes(out)


def monge_dp_profile(g: MongeDagOracle, s: int, t: int,
                     budget: int) -> HopProfile:
    """Reference budget-indexed DP; O(budget * m)."""
    _check_pair(g, s, t)
    if budget < 0:
        raise ValidationError("budget must be >= 0")
    guard_cells((budget + 1) * max(g.m, 1), _DP_CELL_LIMIT,
                "hop-budget reference DP")
    dp = _hop_dp(g, s, budget)
    return HopProfile.from_exact(ValueProfile.from_codes(dp[:, t].copy()))


def monge_dp_targets(g: MongeDagOracle, s: int, k: int) -> ValueProfile:
    """Reference per-target at-most-k values from one DP table."""
    if not (0 <= s <= g.n):
        raise ValidationError("endpoint out of range")
    if k < 1:
        raise ValidationError("edge budget must be >= 1")
    guard_cells((k + 1) * max(g.m, 1), _DP_CELL_LIMIT,
                "hop-budget reference DP")
    dp = _hop_dp(g, s, k)
    return ValueProfile.from_codes(dp.max(axis=0))


def _hop_dp(g: MongeDagOracle, s: int, K: int) -> np.ndarray:
    if g.complete:
        return monge_dense_hop_dp(g._W, s, K)
    return monge_edge_hop_dp(g._indptr, g._csrc, g._cwts, s, K)


def canonical_path(g: MongeDagOracle, s: int, t: int, lam: int) -> list[int]:
    """The penalized-optimal s -> t path that breaks every value tie
    toward the larger successor.  Fixing this rule makes the first-hop
    monotonicity of penalized optima a testable statement."""
    _check_pair(g, s, t)
    suffix = np.full(g.n + 1, NEG_CODE, np.int64)
    suffix[t] = 0
    for u in range(t - 1, s - 1, -1):
        best = NEG_CODE
        for v, w in g.successors(u):
            if v > t or suffix[v] == NEG_CODE:
                continue
            c = w - lam + int(suffix[v])
            if c > best:
                best = c
        suffix[u] = best
    if suffix[s] == NEG_CODE:
        raise InfeasibleError("target unreachable")
    path = [s]
    u = s
    while u != t:
        pick = -1
        for v, w in g.successors(u):
            if v > t or suffix[v] == NEG_CODE:
                continue
            if w - lam + int(suffix[v]) == int(suffix[u]) and v > pick:
                pick = v
        path.append(pick)
        u = pick
    return path


def gen_squared_monge(n: int, *, perturb: int = 0,
                      seed: int = 0) -> MongeDagOracle:
    """Complete oracle with weight(i,j) = -(j-i)^2, optionally shifted by
    a seeded 2-D prefix sum of non-negative increments (which keeps the
    Monge inequality intact, since each adjacent quadruple gains exactly
    one increment cell)."""
    if n < 1:
        raise ValidationError("need n >= 1")
    if perturb < 0:
        raise ValidationError("perturb must be >= 0")
    idx = np.arange(n + 1, dtype=np.int64)
    d = idx[None, :] - idx[:, None]
    W = -(d * d)
    if perturb:
        rng = SplitMix64(seed)
        h = rng.randints(0, perturb, (n + 1) * (n + 1))
        W = W + h.reshape(n + 1, n + 1).cumsum(axis=0).cumsum(axis=1)
    return MongeDagOracle.from_matrix(W)
