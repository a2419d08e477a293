"""Seeded instance families for tests, benchmarks, and the CLI.

Everything here is driven by SplitMix64 so a (family, seed, size) triple
pins the instance bit-for-bit.  The DAG families matter most: the gap
family always satisfies the triangle property behind concave hop
profiles, and the violation family always breaks it with a weight
assignment that makes the breakage visible in the profile itself.
"""

from __future__ import annotations

import numpy as np

from .dag import NodeWeightedDag, check_property_p
from .errors import ValidationError
from .monge import MongeDagOracle
from .rng import SplitMix64

# --- knapsack item families ------------------------------------------------


def gen_uncorrelated(n: int, seed: int, *, max_weight: int = 1000,
                     max_value: int = 1000) -> list[tuple[int, int]]:
    """Weights and values drawn independently."""
    rng = SplitMix64(seed)
    ws = rng.randints(1, max_weight, n)
    vs = rng.randints(1, max_value, n)
    return list(zip(ws.tolist(), vs.tolist()))


def gen_few_distinct(n: int, seed: int, *, distinct: int = 16,
                     max_weight: int = 1000,
                     max_value: int = 1000) -> list[tuple[int, int]]:
    """Many items over a small palette of distinct weights."""
    if distinct < 1:
        raise ValidationError("need at least one distinct weight")
    rng = SplitMix64(seed)
    palette = sorted(set(rng.randints(1, max_weight, distinct).tolist()))
    picks = rng.randints(0, len(palette) - 1, n)
    vs = rng.randints(1, max_value, n)
    return [(palette[p], v) for p, v in zip(picks.tolist(), vs.tolist())]


def gen_small_weights(n: int, seed: int, *, max_weight: int = 100,
                      max_value: int = 10000) -> list[tuple[int, int]]:
    """Weight range kept tiny relative to values."""
    return gen_uncorrelated(n, seed, max_weight=max_weight,
                            max_value=max_value)


def gen_small_values(n: int, seed: int, *, max_weight: int = 10000,
                     max_value: int = 100) -> list[tuple[int, int]]:
    """Value range kept tiny relative to weights."""
    return gen_uncorrelated(n, seed, max_weight=max_weight,
                            max_value=max_value)


KNAPSACK_FAMILIES = {
    "uncorrelated": gen_uncorrelated,
    "few-distinct": gen_few_distinct,
    "small-m": gen_small_weights,
    "small-v": gen_small_values,
}


def default_capacity(items: list[tuple[int, int]]) -> int:
    """Half the total weight, but always enough for the heaviest item."""
    if not items:
        return 0
    total = sum(w for w, _ in items)
    return max(max(w for w, _ in items), total // 2)


# --- sequences ---------------------------------------------------------------


def gen_sequence(n: int, seed: int, *, low: int = -10000,
                 high: int = 10000) -> np.ndarray:
    rng = SplitMix64(seed)
    return rng.randints(low, high, n)


# --- DAG families ------------------------------------------------------------


def wrap_endpoints(n: int, edges, rewards, counted=None) -> NodeWeightedDag:
    """Add an uncounted start 0 and end n+1 around core nodes 1..n.

    The start reaches every node including the end, and every node
    reaches the end, which keeps the wrapped graph transitive whenever
    the core is and leaves the triangle property's verdict unchanged.
    The 0-hop entry of any wrapped profile is 0 via the direct edge.
    """
    shifted = [(u + 1, v + 1) for u, v in edges]
    shifted += [(0, i) for i in range(1, n + 2)]
    shifted += [(i, n + 1) for i in range(1, n + 1)]
    full_rewards = [0] + list(rewards) + [0]
    core = np.ones(n, np.uint8) if counted is None \
        else np.asarray(counted, np.uint8)
    full_counted = np.concatenate(
        [np.zeros(1, np.uint8), core, np.zeros(1, np.uint8)])
    return NodeWeightedDag(n + 2, shifted, full_rewards, full_counted)


def gen_gap_dag(n: int, seed: int, *, theta: int | None = None,
                span: int | None = None, reward_low: int = -50,
                reward_high: int = 50,
                endpointed: bool = True) -> tuple[NodeWeightedDag, int, int]:
    """Random transitive DAG satisfying the triangle property.

    Nodes get sorted integer positions; i -> j exactly when the position
    gap is at least theta.  Any two-step chain spans at least two thetas,
    so every other vertex is within one theta of an endpoint, which is
    the triangle property directly.  Returns (graph, start, target).
    """
    if n < 2:
        raise ValidationError("need n >= 2")
    rng = SplitMix64(seed)
    theta = theta if theta is not None else rng.randint(1, 6)
    span = span if span is not None else 3 * n
    pos = sorted(rng.randint(0, span) for _ in range(n))
    if pos[-1] - pos[0] < theta:
        pos[-1] = pos[0] + theta
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if pos[j] - pos[i] >= theta]
    rewards = [rng.randint(reward_low, reward_high) for _ in range(n)]
    if endpointed:
        return wrap_endpoints(n, edges, rewards), 0, n + 1
    return NodeWeightedDag(n, edges, rewards), 0, n - 1


def gen_transitive_dag(n: int, seed: int, *, density: int = 40) -> list:
    """Edge list of a random transitive DAG (closure of random edges)."""
    rng = SplitMix64(seed)
    succ = [0] * n
    for i in range(n - 1, -1, -1):
        for j in range(i + 1, n):
            if rng.randint(0, 99) < density:
                succ[i] |= (1 << j) | succ[j]
    edges = []
    for i in range(n):
        rest = succ[i]
        while rest:
            j = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            edges.append((i, j))
    return edges


def gen_violation_dag(n: int, seed: int, *, chain_reward: int = 1000,
                      poison: int = -1_000_000) \
        -> tuple[NodeWeightedDag, int, int]:
    """Transitive DAG failing the triangle property, weighted so the
    failure shows up as a concavity break in the hop profile.

    The witness vertex of the failing chain is necessarily disconnected
    from all three chain nodes (transitivity forces that), so giving it
    chain_reward+1, the chain nodes chain_reward, and everything else a
    poison reward pins the profile to [0, chain_reward+1, 2*chain_reward,
    3*chain_reward]: the first two increments differ by 2 the wrong way.
    Returns (graph, start, target).
    """
    if n < 5:
        raise ValidationError("need n >= 5 to fit a chain plus a witness")
    rng = SplitMix64(seed)
    while True:
        edges = gen_transitive_dag(n, rng.next_u64(), density=35)
        g = NodeWeightedDag(n, edges, [0] * n)
        witness = check_property_p(g)
        if not witness.holds:
            break
    u1, u2, u3 = witness.chain
    v = witness.vertex
    rewards = [poison] * n
    rewards[u1] = rewards[u2] = rewards[u3] = chain_reward
    rewards[v] = chain_reward + 1
    return wrap_endpoints(n, edges, rewards), 0, n + 1


# --- Monge instances ---------------------------------------------------------


def gen_random_monge(n: int, seed: int, *, increment: int = 9,
                     offset: int = 50) -> MongeDagOracle:
    """Complete oracle from 2-D prefix sums of non-negative increments
    plus row/column offsets; each adjacent quadruple's slack is exactly
    one increment cell, so the inequality holds by construction."""
    if n < 1:
        raise ValidationError("need n >= 1")
    rng = SplitMix64(seed)
    n1 = n + 1
    h = rng.randints(0, increment, n1 * n1).reshape(n1, n1)
    base = h.cumsum(axis=0).cumsum(axis=1)
    rows = rng.randints(-offset, offset, n1)[:, None]
    cols = rng.randints(-offset, offset, n1)[None, :]
    return MongeDagOracle.from_matrix(base + rows + cols)
