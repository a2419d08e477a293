import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capdp.errors import ValidationError
from capdp.profiles import (
    BOTTOM,
    CONCAVE,
    NOT_APPLICABLE,
    TOP,
    VIOLATION,
    ValueProfile,
    check_concave,
    check_kstep_concave,
    naive_maxplus_conv,
    naive_minplus_conv,
)

finite = st.integers(min_value=-1000, max_value=1000)
ext = st.one_of(finite, st.just(BOTTOM))
maxseq = st.lists(ext, min_size=1, max_size=12)


def py_maxplus(a, b):
    out = [BOTTOM] * (len(a) + len(b) - 1)
    for j, av in enumerate(a):
        if av is BOTTOM:
            continue
        for d, bv in enumerate(b):
            if bv is BOTTOM:
                continue
            s = av + bv
            if out[j + d] is BOTTOM or s > out[j + d]:
                out[j + d] = s
    return out


def test_maxplus_frozen_example():
    assert naive_maxplus_conv([0, 3, 1], [0, 5, 8]) == [0, 5, 8, 11, 9]


def test_minplus_frozen_example():
    assert naive_minplus_conv([0, 3], [0, 1]) == [0, 1, 4]


def test_maxplus_bottom_absorbs():
    got = naive_maxplus_conv([BOTTOM, 0, 2], [BOTTOM, 0, 1])
    assert got == [BOTTOM, BOTTOM, 0, 2, 3]


def test_minplus_top_absorbs():
    got = naive_minplus_conv([TOP, 0], [0, 3, TOP])
    assert got == [TOP, 0, 3, TOP]


def test_profile_basics():
    p = ValueProfile([1, BOTTOM, -4])
    assert len(p) == 3
    assert p[0] == 1
    assert p[1] is BOTTOM
    assert p.tolist() == [1, BOTTOM, -4]
    assert p == [1, BOTTOM, -4]
    assert p[1:] == ValueProfile([BOTTOM, -4])
    assert not p.is_finite()
    assert ValueProfile([0, 7]).is_finite()


def test_profile_rejects_mixed_sentinels():
    with pytest.raises(ValidationError):
        ValueProfile([BOTTOM, 0, TOP])


def test_profile_rejects_empty():
    with pytest.raises(ValidationError):
        ValueProfile([])


def test_profile_rejects_huge_entries():
    with pytest.raises(ValidationError):
        ValueProfile([1 << 58])


def test_running_max():
    p = ValueProfile([BOTTOM, 3, 1, 5, 2])
    assert p.running_max() == [BOTTOM, 3, 3, 5, 5]


def test_maxplus_rejects_top():
    with pytest.raises(ValidationError):
        naive_maxplus_conv([TOP], [0])
    with pytest.raises(ValidationError):
        naive_minplus_conv([BOTTOM], [0])


@given(maxseq, maxseq)
@settings(max_examples=150, deadline=None)
def test_maxplus_matches_python_reference(a, b):
    assert naive_maxplus_conv(a, b).tolist() == py_maxplus(a, b)


@given(maxseq, maxseq)
@settings(max_examples=100, deadline=None)
def test_maxplus_commutes(a, b):
    assert naive_maxplus_conv(a, b) == naive_maxplus_conv(b, a)


@given(maxseq, maxseq, maxseq)
@settings(max_examples=60, deadline=None)
def test_maxplus_associates(a, b, c):
    left = naive_maxplus_conv(naive_maxplus_conv(a, b), c)
    right = naive_maxplus_conv(a, naive_maxplus_conv(b, c))
    assert left == right


@given(st.lists(finite, min_size=1, max_size=10),
       st.lists(finite, min_size=1, max_size=10))
@settings(max_examples=100, deadline=None)
def test_minplus_is_negated_maxplus(a, b):
    neg = naive_maxplus_conv([-x for x in a], [-x for x in b])
    assert naive_minplus_conv(a, b) == [-v for v in neg]


def test_check_concave_accepts_and_rejects():
    assert check_concave([0, 5, 8]).kind == CONCAVE
    assert check_concave([7]).kind == CONCAVE
    w = check_concave([0, 1, 5])
    assert w.kind == VIOLATION
    assert w.index == 1
    assert w.triple == (0, 1, 5)


def test_check_concave_bottom_layout():
    assert check_concave([BOTTOM, 0, 2, 3, BOTTOM]).kind == CONCAVE
    assert check_concave([BOTTOM, BOTTOM]).kind == CONCAVE
    assert check_concave([0, BOTTOM, 2]).kind == NOT_APPLICABLE
    assert check_concave([TOP, 0]).kind == NOT_APPLICABLE


def test_check_kstep_concave():
    assert check_kstep_concave([4, 4, 4, 9, 9, 9, 11], 3).kind == CONCAVE
    assert check_kstep_concave([0, 0, 5], 2).kind == CONCAVE
    # plain concavity is the k=1 case
    assert check_kstep_concave([0, 1, 5], 1).kind == VIOLATION
    # off-stride entry moved
    w = check_kstep_concave([4, 5, 9], 2)
    assert w.kind == VIOLATION and w.index == 1
    # stride core not concave: cores 0, 1, 5
    w = check_kstep_concave([0, 0, 1, 1, 5], 2)
    assert w.kind == VIOLATION and w.index == 2


def test_check_kstep_rejects_bad_stride():
    with pytest.raises(ValidationError):
        check_kstep_concave([0], 0)


def test_profiles_survive_numpy_round_trip():
    p = ValueProfile([BOTTOM, 4, 9])
    q = ValueProfile.from_codes(p.codes.copy())
    assert p == q and hash(p) == hash(q)
