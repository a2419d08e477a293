"""Hop-bounded best paths in node-rewarded DAGs.

The capacity here is the number of *counted* nodes a path visits after its
start.  On transitive DAGs with the triangle property checked by
``check_property_p`` the exact-hop value profile is concave, which lets a
Lagrangian search answer hop-budget queries with O(log) penalized sweeps
instead of a full budget-indexed DP.

Also here: the reduction from picking k entries of a sequence that are at
least delta apart (``solve_sparse_separated``), and the gadget that embeds
a 0/1 knapsack instance into a hop-budgeted DAG (``knapsack_to_dag``).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._kernels import (
    NEG_CODE,
    NEG_THRESH,
    dag_hop_dp,
    dag_probe,
)
from .errors import (
    ConcavityViolationError,
    InfeasibleError,
    NonIntegralError,
    NotTransitiveError,
    ScaleLimitError,
    ValidationError,
    guard_cells,
)
from .knapsack import KnapsackInstance, solve_knapsack_bellman
from .profiles import BOTTOM, ValueProfile, encode_value

_REWARD_GUARD = 1 << 55
_DP_CELL_LIMIT = 200_000_000


class NodeWeightedDag:
    """DAG in topological index order (every edge goes u -> v with u < v).

    Rewards may be BOTTOM (node unusable).  ``counted`` flags which nodes
    advance the hop tally; relays and artificial endpoints are typically
    uncounted.
    """

    __slots__ = ("n", "src", "dst", "reward_codes", "counted", "__dict__")

    def __init__(self, n: int, edges, rewards, counted=None):
        if n < 1:
            raise ValidationError("graph needs at least one node")
        self.n = n
        if isinstance(edges, tuple) and len(edges) == 2 \
                and isinstance(edges[0], np.ndarray):
            src, dst = edges
            src = np.ascontiguousarray(src, np.int64)
            dst = np.ascontiguousarray(dst, np.int64)
        else:
            pairs = [(int(u), int(v)) for u, v in edges]
            src = np.fromiter((u for u, _ in pairs), np.int64, len(pairs))
            dst = np.fromiter((v for _, v in pairs), np.int64, len(pairs))
        if src.shape[0]:
            if int(src.min()) < 0 or int(dst.max()) >= n:
                raise ValidationError("edge endpoint out of range")
            if not np.all(src < dst):
                raise ValidationError(
                    "edges must point forward in the topological index order")
            key = src * n + dst
            if np.unique(key).shape[0] != key.shape[0]:
                raise ValidationError("duplicate edge")
        self.src = src
        self.dst = dst
        if isinstance(rewards, np.ndarray) and rewards.dtype == np.int64:
            codes = np.ascontiguousarray(rewards)
        else:
            codes = np.fromiter((encode_value(r) for r in rewards), np.int64)
        if codes.shape[0] != n:
            raise ValidationError("need one reward per node")
        finite = codes > NEG_THRESH
        if np.any(np.abs(codes[finite]) > _REWARD_GUARD):
            raise ValidationError("rewards exceed the 2**55 guard")
        mx = int(np.abs(codes[finite]).max()) if finite.any() else 0
        if (2 * n * n + n) * max(mx, 1) > 1 << 60:
            raise ValidationError(
                "n^2 * max|reward| too large for exact penalized sweeps")
        self.reward_codes = codes
        if counted is None:
            self.counted = np.ones(n, np.uint8)
        else:
            self.counted = np.ascontiguousarray(
                np.asarray(counted, np.uint8))
            if self.counted.shape[0] != n:
                raise ValidationError("need one counted flag per node")

    @property
    def m(self) -> int:
        return int(self.src.shape[0])

    @property
    def max_abs_reward(self) -> int:
        finite = self.reward_codes > NEG_THRESH
        if not finite.any():
            return 0
        return int(np.abs(self.reward_codes[finite]).max())

    @cached_property
    def _csr_in(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, src-sorted-by-destination): in-edges of each node."""
        order = np.argsort(self.dst, kind="stable")
        counts = np.bincount(self.dst, minlength=self.n)
        indptr = np.zeros(self.n + 1, np.int64)
        np.cumsum(counts, out=indptr[1:])
        return indptr, np.ascontiguousarray(self.src[order])

    @cached_property
    def _succ_masks(self) -> list[int]:
        succ = [0] * self.n
        for u, v in zip(self.src.tolist(), self.dst.tolist()):
            succ[u] |= 1 << v
        return succ

    @cached_property
    def _pred_masks(self) -> list[int]:
        pred = [0] * self.n
        for u, v in zip(self.src.tolist(), self.dst.tolist()):
            pred[v] |= 1 << u
        return pred

    def is_transitive(self) -> bool:
        succ = self._succ_masks
        for u in range(self.n):
            su = succ[u]
            rest = su
            while rest:
                v = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                if succ[v] & ~su:
                    return False
        return True

    def rewards(self) -> ValueProfile:
        return ValueProfile.from_codes(self.reward_codes.copy())


@dataclass(frozen=True)
class HopProfile:
    """exact[k]: best value visiting exactly k counted nodes after the
    start; at_most[k] is its running maximum."""

    exact: ValueProfile
    at_most: ValueProfile

    @classmethod
    def from_exact(cls, exact: ValueProfile) -> "HopProfile":
        return cls(exact, exact.running_max())


def dp_hop_profile(g: NodeWeightedDag, s: int, t: int, budget: int) -> HopProfile:
    """Reference budget-indexed DP; O(budget * m)."""
    _check_endpoints(g, s, t)
    if budget < 0:
        raise ValidationError("budget must be >= 0")
    guard_cells((budget + 1) * max(g.m, 1), _DP_CELL_LIMIT,
                "hop-budget reference DP")
    indptr, src = g._csr_in
    dp = dag_hop_dp(indptr, src, g.reward_codes, g.counted, s, budget)
    return HopProfile.from_exact(ValueProfile.from_codes(dp[:, t].copy()))


def _check_endpoints(g: NodeWeightedDag, s: int, t: int) -> None:
    if not (0 <= s < g.n and 0 <= t < g.n):
        raise ValidationError("endpoint out of range")
    if s == t:
        raise ValidationError("start and target must differ")
    if s > t:
        raise InfeasibleError("target precedes start in topological order")


@dataclass(frozen=True)
class PropertyPWitness:
    """holds=True means: for every 2-step chain u1 -> u2 -> u3 every other
    vertex v satisfies u1 -> v or v -> u3.  Otherwise the offending chain
    and vertex are reported."""

    holds: bool
    chain: tuple[int, int, int] | None = None
    vertex: int | None = None

    def __bool__(self) -> bool:
        return self.holds


def check_property_p(g: NodeWeightedDag) -> PropertyPWitness:
    if not g.is_transitive():
        raise NotTransitiveError("property check expects a transitive DAG")
    succ = g._succ_masks
    pred = g._pred_masks
    full = (1 << g.n) - 1
    for u2 in range(g.n):
        preds = pred[u2]
        while preds:
            u1 = (preds & -preds).bit_length() - 1
            preds &= preds - 1
            succs = succ[u2]
            while succs:
                u3 = (succs & -succs).bit_length() - 1
                succs &= succs - 1
                bad = full & ~(succ[u1] | pred[u3])
                bad &= ~((1 << u1) | (1 << u2) | (1 << u3))
                if bad:
                    v = (bad & -bad).bit_length() - 1
                    return PropertyPWitness(False, (u1, u2, u3), v)
    return PropertyPWitness(True)


@dataclass(frozen=True)
class LagrangianOutcome:
    """One penalized sweep: with penalty lam per counted hop, the best
    penalized value and the hop-count range among penalized optima."""

    lam: int
    best: int
    k_min: int
    k_max: int


@dataclass(frozen=True)
class LagrangianResult:
    value: int
    certificate: LagrangianOutcome
    probe_count: int


class _ProbeCache:
    def __init__(self, g: NodeWeightedDag, s: int):
        self.indptr, self.csrc = g._csr_in
        self.rew = g.reward_codes
        self.counted = g.counted
        self.s = s
        self.memo: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    def __call__(self, lam: int):
        hit = self.memo.get(lam)
        if hit is None:
            hit = dag_probe(self.indptr, self.csrc, self.rew, self.counted,
                            lam, self.s)
            self.memo[lam] = hit
        return hit

    @property
    def count(self) -> int:
        return len(self.memo)


def solve_lagrangian(g: NodeWeightedDag, s: int, t: int, k: int,
                     mode: str = "at-most") -> LagrangianResult:
    """Hop-budget query via penalty search.

    mode="at-most": best value over paths with at most k counted hops.
    mode="exact": exactly k counted hops.  Exactness relies on the
    exact-hop profile being concave (transitive + triangle property);
    a detectable breakdown raises ConcavityViolationError.
    """
    _check_endpoints(g, s, t)
    if k < 0:
        raise ValidationError("hop budget must be >= 0")
    if mode not in ("at-most", "exact"):
        raise ValidationError(f"unknown mode {mode!r}")
    probe = _ProbeCache(g, s)
    B = 2 * g.n * max(1, g.max_abs_reward)

    val_hi, kmin_hi, _ = probe(B)
    if val_hi[t] == NEG_CODE:
        raise InfeasibleError("target unreachable")
    k_lo = int(kmin_hi[t])
    if k < k_lo:
        raise InfeasibleError(
            f"every path needs at least {k_lo} counted hops, budget is {k}")

    def outcome(lam: int) -> LagrangianOutcome:
        val, kmin, kmax = probe(lam)
        return LagrangianOutcome(lam, int(val[t]), int(kmin[t]), int(kmax[t]))

    if mode == "at-most":
        oc0 = outcome(0)
        if oc0.k_min <= k:
            return LagrangianResult(oc0.best, oc0, probe.count)
        lo, hi = 1, B
    else:
        _, _, kmax_lo = probe(-B)
        k_hi = int(kmax_lo[t])
        if k > k_hi:
            raise InfeasibleError(
                f"no path has {k} counted hops (max is {k_hi})")
        lo, hi = -B, B

    while lo < hi:
        mid = (lo + hi) // 2
        _, kmin, _ = probe(mid)
        if int(kmin[t]) <= k:
            hi = mid
        else:
            lo = mid + 1
    oc = outcome(lo)
    if not (oc.k_min <= k <= oc.k_max):
        raise ConcavityViolationError(
            f"hop profile is not concave near k={k}: penalty {lo} "
            f"covers [{oc.k_min}, {oc.k_max}]")
    return LagrangianResult(oc.best + lo * k, oc, probe.count)


def probe_budget(n: int, max_abs_reward: int) -> int:
    """Advertised ceiling on penalized sweeps per query."""
    return 2 * math.ceil(math.log2(max(4 * n * max(1, max_abs_reward), 2))) + 4


# --- sparse separated picks ---------------------------------------------


def _separated_graph(a: np.ndarray, delta: int) -> NodeWeightedDag:
    """Chain gadget: counted pick-nodes u_i (reward a[i]) and uncounted
    relay nodes v_i; u_i -> v_i, v_i -> v_{i+1}, and v_i -> u_{i+delta}
    enforce the minimum index gap."""
    n = a.shape[0]
    idx = np.arange(n, dtype=np.int64)
    u = 1 + 2 * idx
    v = 2 + 2 * idx
    t = 2 * n + 1
    srcs = [np.zeros(n, np.int64), u, v[:-1], u]
    dsts = [u, v, v[1:], np.full(n, t, np.int64)]
    if n > delta:
        srcs.append(v[:n - delta])
        dsts.append(u[delta:])
    src = np.concatenate(srcs)
    dst = np.concatenate(dsts)
    rewards = np.zeros(2 * n + 2, np.int64)
    rewards[u] = a
    counted = np.zeros(2 * n + 2, np.uint8)
    counted[u] = 1
    return NodeWeightedDag(2 * n + 2, (src, dst), rewards, counted)


def solve_sparse_separated(a, k: int, delta: int) -> int:
    """Max sum of exactly k entries of a, pairwise at least delta apart
    in index; O((n + k) log) via the penalty search on the chain gadget."""
    arr = np.asarray(list(a) if not isinstance(a, np.ndarray) else a, np.int64)
    n = int(arr.shape[0])
    if n < 1:
        raise ValidationError("sequence must be non-empty")
    if k < 1 or delta < 1:
        raise ValidationError("need k >= 1 and delta >= 1")
    if np.abs(arr).max() > _REWARD_GUARD:
        raise ValidationError("entries exceed the 2**55 guard")
    if (k - 1) * delta > n - 1:
        raise InfeasibleError(
            f"cannot place {k} picks {delta} apart in {n} slots")
    g = _separated_graph(arr, delta)
    return solve_lagrangian(g, 0, 2 * n + 1, k, mode="exact").value


def separated_dp_oracle(a, k: int, delta: int) -> int:
    """Layered O(n*k) reference for solve_sparse_separated."""
    arr = np.asarray(list(a) if not isinstance(a, np.ndarray) else a, np.int64)
    n = int(arr.shape[0])
    if n < 1 or k < 1 or delta < 1:
        raise ValidationError("need non-empty a, k >= 1, delta >= 1")
    if (k - 1) * delta > n - 1:
        raise InfeasibleError(
            f"cannot place {k} picks {delta} apart in {n} slots")
    guard_cells(n * k, _DP_CELL_LIMIT, "separated reference DP")
    prev = np.zeros(n, np.int64)
    for layer in range(1, k + 1):
        shifted = np.empty(n, np.int64)
        if layer == 1:
            shifted[:delta] = 0
        else:
            shifted[:delta] = NEG_CODE
        shifted[delta:] = prev[:n - delta] if n > delta else 0
        cand = shifted + arr
        prev = np.maximum.accumulate(cand)
    best = int(prev[-1])
    if best <= NEG_THRESH:
        raise InfeasibleError("no placement found")
    return best


# --- knapsack embedding ---------------------------------------------------


@dataclass(frozen=True)
class KnapsackDagBridge:
    """Gadget graph whose hop-budget optimum linearly encodes a knapsack
    optimum: at_most[budget] == scale * knapsack_opt + offset."""

    dag: NodeWeightedDag
    source: int
    sink: int
    budget: int
    scale: int
    offset: int

    def decode(self, gadget_value: int) -> int:
        if (gadget_value - self.offset) % self.scale:
            raise ValidationError("gadget value is not an encoded optimum")
        return (gadget_value - self.offset) // self.scale


def knapsack_to_dag(inst: KnapsackInstance, *,
                    allow_large: bool = False) -> KnapsackDagBridge:
    """Embed a 0/1 instance as junction-to-junction parallel paths: item i
    is either a 1-hop skip path or a (w_i + 1)-hop take path whose reward
    is spread over its nodes, made integral by scaling everything by
    lcm(w_i + 1).

    Node counts blow up quickly, so tiny limits apply unless overridden
    (allow_large=True or CAPDP_GUARD_OVERRIDE=1).
    """
    if inst.offset:
        raise ValidationError("gadget embedding expects offset-free instances")
    override = allow_large or os.environ.get("CAPDP_GUARD_OVERRIDE") == "1"
    if not override:
        if inst.n > 5 or inst.capacity > 8 or inst.max_weight > 4:
            raise ScaleLimitError(
                "embedding limits: n <= 5, T <= 8, weights <= 4 "
                "(set allow_large=True or CAPDP_GUARD_OVERRIDE=1)")
    n = inst.n
    T = inst.capacity
    big = max(1, n * inst.max_weight * inst.max_value)
    scale = math.lcm(*(w + 1 for w in inst.weights)) if n else 1
    edges: list[tuple[int, int]] = []
    rewards: list[int] = [0]
    junction = 0
    nxt = 1
    for w, v in zip(inst.weights, inst.values):
        share, rem = divmod(scale * (big + v), w + 1)
        if rem:
            raise NonIntegralError("reward share did not come out integral")
        mid = nxt
        rewards.append(scale * big)
        nxt += 1
        take = list(range(nxt, nxt + w + 1))
        rewards.extend([share] * (w + 1))
        nxt += w + 1
        new_junction = nxt
        rewards.append(0)
        nxt += 1
        edges.append((junction, mid))
        edges.append((mid, new_junction))
        edges.append((junction, take[0]))
        edges.extend(zip(take, take[1:]))
        edges.append((take[-1], new_junction))
        junction = new_junction
    counted = None
    if n == 0:
        # degenerate: one uncounted skip node keeps source != sink while
        # leaving the 0-hop entry finite
        rewards.append(0)
        edges.append((0, 1))
        nxt = 2
        junction = 1
        counted = np.zeros(2, np.uint8)
    dag = NodeWeightedDag(nxt, edges, rewards, counted)
    return KnapsackDagBridge(dag, 0, junction, 2 * n + T,
                             scale, n * big * scale)


def knapsack_via_dag(inst: KnapsackInstance, *,
                     allow_large: bool = False) -> int:
    bridge = knapsack_to_dag(inst, allow_large=allow_large)
    prof = dp_hop_profile(bridge.dag, bridge.source, bridge.sink, bridge.budget)
    return bridge.decode(prof.at_most[bridge.budget])


def knapsack_dag_oracle(inst: KnapsackInstance) -> int:
    return int(solve_knapsack_bellman(inst).codes[-1])
