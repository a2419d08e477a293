"""Hop-budgeted DAG paths: DP reference, penalty search, reductions."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capdp._kernels import dag_probe
from capdp.dag import (
    NodeWeightedDag,
    check_property_p,
    dp_hop_profile,
    knapsack_to_dag,
    knapsack_via_dag,
    probe_budget,
    separated_dp_oracle,
    solve_lagrangian,
    solve_sparse_separated,
)
from capdp.errors import (
    ConcavityViolationError,
    InfeasibleError,
    NotTransitiveError,
    ScaleLimitError,
    ValidationError,
)
from capdp.knapsack import KnapsackInstance, solve_knapsack_bellman
from capdp.profiles import BOTTOM
from capdp.rng import SplitMix64


def random_transitive(rng, n, pct=40):
    """Transitive DAG on 0..n-1 via closure of random forward edges."""
    succ = [0] * n
    for i in range(n - 1, -1, -1):
        for j in range(i + 1, n):
            if rng.randint(0, 99) < pct:
                succ[i] |= (1 << j) | succ[j]
    edges = []
    for i in range(n):
        rest = succ[i]
        while rest:
            j = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            edges.append((i, j))
    return edges


def semiorder(rng, n, span, theta):
    """Edge i -> j iff position gap >= theta; transitive and triangle-safe."""
    pos = sorted(rng.randint(0, span) for _ in range(n))
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if pos[j] - pos[i] >= theta]
    return edges


def enumerate_profile(n, edges, rewards, counted, s, t, budget):
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
    best = [None] * (budget + 1)
    stack = [(s, 0, 0)]
    while stack:
        u, hops, val = stack.pop()
        if u == t and (best[hops] is None or val > best[hops]):
            best[hops] = val
        for v in adj[u]:
            if rewards[v] is BOTTOM:
                continue
            nh = hops + (1 if counted[v] else 0)
            if nh <= budget:
                stack.append((v, nh, val + rewards[v]))
    return [BOTTOM if b is None else b for b in best]


class TestHopProfileDp:
    def test_single_edge(self):
        g = NodeWeightedDag(2, [(0, 1)], [0, 7])
        prof = dp_hop_profile(g, 0, 1, 1)
        assert prof.exact.tolist() == [BOTTOM, 7]
        assert prof.at_most.tolist() == [BOTTOM, 7]

    def test_complete_dag_unit_rewards(self):
        n = 8
        edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
        g = NodeWeightedDag(n, edges, [1] * n)
        prof = dp_hop_profile(g, 0, n - 1, n - 1)
        assert prof.exact.tolist() == [BOTTOM] + list(range(1, n))

    def test_uncounted_relay_adds_value_not_hops(self):
        # 0 -> 1(relay, +5) -> 2(+3): target reached in one counted hop
        g = NodeWeightedDag(3, [(0, 1), (1, 2)], [0, 5, 3],
                            np.array([1, 0, 1], np.uint8))
        prof = dp_hop_profile(g, 0, 2, 2)
        assert prof.exact.tolist() == [BOTTOM, 8, BOTTOM]

    def test_bottom_reward_blocks_node(self):
        g = NodeWeightedDag(3, [(0, 1), (1, 2), (0, 2)], [0, BOTTOM, 4])
        prof = dp_hop_profile(g, 0, 2, 2)
        assert prof.exact.tolist() == [BOTTOM, 4, BOTTOM]

    def test_budget_may_exceed_node_count(self):
        g = NodeWeightedDag(2, [(0, 1)], [0, 2])
        prof = dp_hop_profile(g, 0, 1, 9)
        assert prof.at_most.tolist() == [BOTTOM] + [2] * 9

    def test_matches_path_enumeration(self):
        rng = SplitMix64(0x1A6)
        for _ in range(150):
            n = rng.randint(2, 11)
            edges = random_transitive(rng, n)
            rewards = [rng.randint(-50, 50) for _ in range(n)]
            for i in range(n):
                if rng.randint(0, 9) == 0:
                    rewards[i] = BOTTOM
            counted = [rng.randint(0, 3) > 0 for _ in range(n)]
            budget = rng.randint(0, n + 2)
            g = NodeWeightedDag(n, edges, rewards,
                                np.array(counted, np.uint8))
            prof = dp_hop_profile(g, 0, n - 1, budget)
            ref = enumerate_profile(n, edges, rewards, counted, 0, n - 1,
                                    budget)
            assert prof.exact.tolist() == ref


class TestPropertyCheck:
    def test_complete_dag_holds(self):
        n = 8
        edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
        g = NodeWeightedDag(n, edges, [1] * n)
        assert g.is_transitive()
        assert check_property_p(g).holds

    def test_gap_graph_holds(self):
        n, d = 10, 3
        edges = [(i, j) for i in range(n) for j in range(i + 1, n)
                 if j - i >= d]
        g = NodeWeightedDag(n, edges, [0] * n)
        assert check_property_p(g).holds

    def test_requires_transitive(self):
        g = NodeWeightedDag(3, [(0, 1), (1, 2)], [0, 0, 0])
        with pytest.raises(NotTransitiveError):
            check_property_p(g)

    def test_violation_witness(self):
        # chain 1->2->3 plus vertex 4 detached from it
        edges = [(0, i) for i in range(1, 6)] + [(i, 5) for i in range(1, 5)]
        edges += [(1, 2), (2, 3), (1, 3)]
        g = NodeWeightedDag(6, edges, [0] * 6,
                            np.array([0, 1, 1, 1, 1, 0], np.uint8))
        w = check_property_p(g)
        assert not w.holds
        assert w.chain == (1, 2, 3)
        assert w.vertex == 4


class TestLagrangian:
    def test_single_edge_both_modes(self):
        g = NodeWeightedDag(2, [(0, 1)], [0, 7])
        assert solve_lagrangian(g, 0, 1, 1, mode="at-most").value == 7
        assert solve_lagrangian(g, 0, 1, 1, mode="exact").value == 7

    def test_complete_dag_exact_all_budgets(self):
        n = 8
        edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
        g = NodeWeightedDag(n, edges, [1] * n)
        for k in range(1, n):
            assert solve_lagrangian(g, 0, n - 1, k, mode="exact").value == k

    def test_non_concave_profile_is_detected(self):
        # profile [0, 1001, 2000, 3000]: increments 1001, 999, 1000
        edges = [(0, i) for i in range(1, 6)] + [(i, 5) for i in range(1, 5)]
        edges += [(1, 2), (2, 3), (1, 3)]
        g = NodeWeightedDag(6, edges, [0, 1000, 1000, 1000, 1001, 0],
                            np.array([0, 1, 1, 1, 1, 0], np.uint8))
        prof = dp_hop_profile(g, 0, 5, 3)
        assert prof.exact.tolist() == [0, 1001, 2000, 3000]
        assert not check_property_p(g).holds
        with pytest.raises(ConcavityViolationError):
            solve_lagrangian(g, 0, 5, 2, mode="exact")

    def test_matches_dp_on_semiorder_graphs(self):
        rng = SplitMix64(0x1A7)
        graphs = 0
        while graphs < 60:
            n = rng.randint(3, 40)
            theta = rng.randint(1, 6)
            edges = semiorder(rng, n, 3 * n, theta)
            rewards = [rng.randint(-40, 60) for _ in range(n)]
            g = NodeWeightedDag(n, edges, rewards)
            assert check_property_p(g).holds
            try:
                prof = dp_hop_profile(g, 0, n - 1, n)
            except InfeasibleError:
                continue
            ex = prof.exact.tolist()
            am = prof.at_most.tolist()
            if all(v is BOTTOM for v in am):
                continue
            graphs += 1
            cap = probe_budget(n, g.max_abs_reward)
            for k in range(n + 1):
                for mode, want in (("at-most", am[k]), ("exact", ex[k])):
                    try:
                        got = solve_lagrangian(g, 0, n - 1, k, mode=mode)
                    except InfeasibleError:
                        assert want is BOTTOM
                        continue
                    assert want is not BOTTOM
                    assert got.value == want
                    assert got.probe_count <= cap

    def test_argmax_range_invariant_under_scaling(self):
        rng = SplitMix64(0x1A8)
        for _ in range(60):
            n = rng.randint(3, 20)
            theta = rng.randint(1, 4)
            edges = semiorder(rng, n, 2 * n, theta)
            rewards = [rng.randint(-30, 30) for _ in range(n)]
            c = rng.randint(2, 9)
            g1 = NodeWeightedDag(n, edges, rewards)
            g2 = NodeWeightedDag(n, edges, [c * r for r in rewards])
            ip1, cs1 = g1._csr_in
            ip2, cs2 = g2._csr_in
            for lam in (-7, -1, 0, 1, 3, 11):
                _, lo1, hi1 = dag_probe(ip1, cs1, g1.reward_codes,
                                        g1.counted, lam, 0)
                _, lo2, hi2 = dag_probe(ip2, cs2, g2.reward_codes,
                                        g2.counted, c * lam, 0)
                assert np.array_equal(lo1, lo2)
                assert np.array_equal(hi1, hi2)

    def test_unreachable_target(self):
        g = NodeWeightedDag(3, [(0, 1)], [0, 1, 1])
        with pytest.raises(InfeasibleError):
            solve_lagrangian(g, 0, 2, 1)

    def test_budget_below_minimum_hops(self):
        g = NodeWeightedDag(3, [(0, 1), (1, 2)], [0, 1, 1])
        with pytest.raises(InfeasibleError):
            solve_lagrangian(g, 0, 2, 1, mode="exact")

    def test_exact_budget_above_maximum_hops(self):
        g = NodeWeightedDag(2, [(0, 1)], [0, 1])
        with pytest.raises(InfeasibleError):
            solve_lagrangian(g, 0, 1, 5, mode="exact")


class TestSparseSeparated:
    def test_frozen_example(self):
        assert solve_sparse_separated([5, 1, 4, 3], 2, 2) == 9
        assert separated_dp_oracle([5, 1, 4, 3], 2, 2) == 9

    def test_relay_heavy_tail(self):
        # best pair skips two slots, so the chain must cross extra relays
        assert solve_sparse_separated([1, 0, 0, 1, 100], 2, 2) == 101
        assert separated_dp_oracle([1, 0, 0, 1, 100], 2, 2) == 101

    def test_single_pick(self):
        assert solve_sparse_separated([-4, -9], 1, 5) == -4

    def test_infeasible_spacing(self):
        with pytest.raises(InfeasibleError):
            solve_sparse_separated([1, 2], 2, 2)
        with pytest.raises(InfeasibleError):
            separated_dp_oracle([1, 2], 2, 2)

    def test_matches_oracle(self):
        rng = SplitMix64(0x5E9)
        done = 0
        while done < 200:
            n = rng.randint(1, 60)
            delta = rng.randint(1, 8)
            k = rng.randint(1, max(1, (n - 1) // delta + 1))
            if (k - 1) * delta > n - 1:
                continue
            a = [rng.randint(-100, 100) for _ in range(n)]
            assert solve_sparse_separated(a, k, delta) == \
                separated_dp_oracle(a, k, delta)
            done += 1

    @given(st.lists(st.integers(-50, 50), min_size=1, max_size=24),
           st.integers(1, 4), st.integers(1, 4))
    @settings(max_examples=60, deadline=None)
    def test_oracle_agreement_property(self, a, k, delta):
        if (k - 1) * delta > len(a) - 1:
            with pytest.raises(InfeasibleError):
                solve_sparse_separated(a, k, delta)
        else:
            assert solve_sparse_separated(a, k, delta) == \
                separated_dp_oracle(a, k, delta)


class TestKnapsackBridge:
    def test_single_item_take(self):
        inst = KnapsackInstance.build([(1, 2)], 1)
        assert knapsack_via_dag(inst) == 2

    def test_single_item_skip(self):
        inst = KnapsackInstance.build([(1, 2)], 0)
        assert knapsack_via_dag(inst) == 0

    def test_empty_instance(self):
        assert knapsack_via_dag(KnapsackInstance.build([], 0)) == 0
        assert knapsack_via_dag(KnapsackInstance.build([], 5)) == 0

    def test_exhaustive_small_grid(self):
        for ws in itertools.product([1, 2, 3], repeat=2):
            for vs in itertools.product([1, 2], repeat=2):
                for T in range(0, 6):
                    inst = KnapsackInstance.build(list(zip(ws, vs)), T)
                    got = knapsack_via_dag(inst, allow_large=True)
                    ref = int(solve_knapsack_bellman(inst).codes[-1])
                    assert got == ref, (ws, vs, T)

    def test_three_item_spot_checks(self):
        rng = SplitMix64(0xB51)
        for _ in range(25):
            items = [(rng.randint(1, 4), rng.randint(1, 3))
                     for _ in range(3)]
            T = rng.randint(0, 8)
            inst = KnapsackInstance.build(items, T)
            got = knapsack_via_dag(inst, allow_large=True)
            assert got == int(solve_knapsack_bellman(inst).codes[-1])

    def test_bridge_shape(self):
        inst = KnapsackInstance.build([(2, 5)], 2)
        bridge = knapsack_to_dag(inst)
        # junction + (skip mid, 3 take nodes, junction) per item
        assert bridge.dag.n == 1 + 1 + 3 + 1
        assert bridge.budget == 2 * 1 + 2
        assert bridge.scale == 3
        assert bridge.decode(bridge.scale * 5 + bridge.offset) == 5

    def test_scale_guard(self):
        inst = KnapsackInstance.build([(5, 3)] * 6, 10)
        with pytest.raises(ScaleLimitError):
            knapsack_to_dag(inst)

    def test_rejects_offset_instances(self):
        inst = KnapsackInstance.build([(0, 4), (1, 2)], 1, lax=True)
        assert inst.offset == 4
        with pytest.raises(ValidationError):
            knapsack_to_dag(inst)


class TestGraphValidation:
    def test_backward_edge(self):
        with pytest.raises(ValidationError):
            NodeWeightedDag(3, [(1, 0)], [0, 0, 0])

    def test_duplicate_edge(self):
        with pytest.raises(ValidationError):
            NodeWeightedDag(2, [(0, 1), (0, 1)], [0, 0])

    def test_endpoint_out_of_range(self):
        with pytest.raises(ValidationError):
            NodeWeightedDag(2, [(0, 2)], [0, 0])

    def test_reward_count_mismatch(self):
        with pytest.raises(ValidationError):
            NodeWeightedDag(2, [(0, 1)], [0])

    def test_same_endpoints(self):
        g = NodeWeightedDag(2, [(0, 1)], [0, 0])
        with pytest.raises(ValidationError):
            dp_hop_profile(g, 1, 1, 1)

    def test_reversed_endpoints_infeasible(self):
        g = NodeWeightedDag(2, [(0, 1)], [0, 0])
        with pytest.raises(InfeasibleError):
            dp_hop_profile(g, 1, 0, 1)

    def test_reward_guard(self):
        with pytest.raises(ValidationError):
            NodeWeightedDag(2, [(0, 1)], [0, 1 << 56])
