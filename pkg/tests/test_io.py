"""Instance file parsing, formatting, and report text."""

import numpy as np
import pytest

from capdp.dag import NodeWeightedDag, dp_hop_profile
from capdp.errors import ParseError, ValidationError
from capdp.generators import default_capacity, gen_sequence, gen_uncorrelated
from capdp.io import (
    format_dag,
    format_items,
    format_monge,
    format_report,
    format_sequence,
    load_instance,
    parse_instance,
    profile_text,
)
from capdp.monge import MongeDagOracle, gen_squared_monge
from capdp.profiles import BOTTOM, TOP


class TestItemsFormat:
    def test_basic_instance(self):
        inst = parse_instance("knapsack", "3 5\n2 3\n2 3\n3 4\n")
        assert inst.kind == "knapsack"
        assert inst.descriptor == {"n": 3, "D": 2, "M": 3, "V": 4, "T": 5}
        assert list(inst.payload.weights) == [2, 2, 3]
        assert list(inst.payload.values) == [3, 3, 4]
        assert inst.payload.capacity == 5

    def test_comments_and_blank_lines(self):
        text = "# header\n3 5\n\n2 3\n2 3  # duplicate\n3 4\n"
        inst = parse_instance("knapsack", text)
        assert list(inst.payload.weights) == [2, 2, 3]

    def test_unbounded_shares_shape(self):
        inst = parse_instance("unbounded", "2 10\n3 5\n4 9\n")
        assert inst.descriptor["M"] == 4
        assert inst.descriptor["T"] == 10

    @pytest.mark.parametrize("text,fragment", [
        ("", "missing header"),
        ("3 5\n2 3\n2 3\n", "missing item"),
        ("3 5\n2 3\n2 3\n3 4\n9 9\n", "trailing"),
        ("3 5\n2 3\n2 x\n3 4\n", "expected integer"),
        ("3\n2 3\n", "needs 2 integers"),
        ("1 5\n2 3 7\n", "needs 2 integers"),
    ])
    def test_parse_errors(self, text, fragment):
        with pytest.raises(ParseError, match=fragment):
            parse_instance("knapsack", text)

    def test_zero_weight_is_validation(self):
        with pytest.raises(ValidationError, match="zero-weight"):
            parse_instance("knapsack", "1 5\n0 3\n")

    def test_unknown_kind(self):
        with pytest.raises(ValidationError, match="unknown kind"):
            parse_instance("mystery", "1 1\n1 1\n")

    def test_round_trip(self):
        items = gen_uncorrelated(8, seed=5)
        cap = default_capacity(items)
        back = parse_instance("knapsack", format_items(items, cap))
        assert list(zip(back.payload.weights, back.payload.values)) == items
        assert back.payload.capacity == cap

    def test_load_from_disk(self, tmp_path):
        path = tmp_path / "case.txt"
        path.write_text("1 4\n2 9\n")
        inst = load_instance("knapsack", path)
        assert inst.payload.capacity == 4


class TestDagFormat:
    def test_round_trip_preserves_profile(self):
        g = NodeWeightedDag(4, [(0, 1), (0, 2), (1, 3), (2, 3), (0, 3),
                                (1, 2)], [0, 5, 7, 1])
        back = parse_instance("dag", format_dag(g, 0, 3, transitive=True))
        assert back.descriptor == {"n": 4, "m": 6, "s": 0, "t": 3}
        assert back.payload.transitive
        want = dp_hop_profile(g, 0, 3, 3).exact
        got = dp_hop_profile(back.payload.graph, 0, 3, 3).exact
        assert list(want.codes) == list(got.codes)

    def test_false_transitive_flag_rejected(self):
        g = NodeWeightedDag(3, [(0, 1), (1, 2)], [0, 1, 2])
        text = format_dag(g, 0, 2, transitive=True)
        with pytest.raises(ValidationError, match="declared transitive"):
            parse_instance("dag", text)

    def test_flag_absent_allows_chain(self):
        g = NodeWeightedDag(3, [(0, 1), (1, 2)], [0, 1, 2])
        back = parse_instance("dag", format_dag(g, 0, 2))
        assert not back.payload.transitive

    def test_endpoint_out_of_range(self):
        g = NodeWeightedDag(3, [(0, 1), (1, 2)], [0, 1, 2])
        text = format_dag(g, 0, 2).replace("3 2 0 2", "3 2 0 7")
        with pytest.raises(ValidationError, match="out of range"):
            parse_instance("dag", text)


class TestMongeFormat:
    def test_complete_round_trip(self):
        oracle = gen_squared_monge(5, perturb=3, seed=11)
        text = format_monge(oracle, 0, 5)
        back = parse_instance("monge", text)
        assert back.payload.complete
        assert back.payload.oracle.complete
        assert format_monge(back.payload.oracle, 0, 5) == text

    def test_sparse_round_trip(self):
        oracle = MongeDagOracle.from_edges(4, [(0, 1, 3), (1, 4, -2),
                                               (0, 4, 9)])
        back = parse_instance("monge", format_monge(oracle, 0, 4))
        assert not back.payload.complete
        assert back.payload.oracle.weight(0, 4) == 9
        assert back.payload.oracle.weight(2, 3) is BOTTOM

    def test_complete_flag_needs_all_edges(self):
        text = "5 3 0 4 complete\n0 1 3\n1 4 -2\n0 4 9\n"
        with pytest.raises(ValidationError, match="declared complete"):
            parse_instance("monge", text)


class TestSequenceFormat:
    def test_round_trip(self):
        values = gen_sequence(40, seed=3, low=-9, high=9)
        back = parse_instance("sequence", format_sequence(values, 7, 3))
        assert back.descriptor == {"n": 40, "k": 7, "delta": 3}
        assert list(back.payload.values) == list(values)
        assert back.payload.picks == 7
        assert back.payload.gap == 3

    def test_values_wrap_lines_freely(self):
        back = parse_instance("sequence", "4 2 1\n5 6\n7\n8\n")
        assert list(back.payload.values) == [5, 6, 7, 8]

    def test_too_many_values(self):
        with pytest.raises(ParseError, match="more than 4"):
            parse_instance("sequence", "4 2 1\n5 6 7 8 9\n")


class TestReportText:
    def test_stable_key_order(self):
        rep = format_report([("kind", "knapsack"), ("n", 3), ("value", 7),
                             ("wall_ms", 1.25)])
        assert rep == "kind=knapsack\nn=3\nvalue=7\nwall_ms=1.25\n"

    def test_profile_text_sentinels(self):
        assert profile_text([BOTTOM, 4, 0, TOP]) == "-inf,4,0,inf"
        assert profile_text(np.array([1, 2], np.int64).tolist()) == "1,2"
