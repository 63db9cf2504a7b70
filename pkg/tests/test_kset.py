from functools import lru_cache
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from singcalc.cfrac import blow_up_at, is_zero_chain
from singcalc.errors import DegenerateLength
from singcalc.kset import enumerate_zero_chains, is_admissible_zero, k_set


@lru_cache(maxsize=None)
def zero_chains_by_blow_up(bounds):
    """Reference generator: blow [0] up, pruning by the bounds."""
    e = len(bounds)
    if e == 1:
        return frozenset({(0,)}) if bounds[0] >= 0 else frozenset()
    if min(bounds) < 1:
        return frozenset()
    out = set()
    for k in range(e):
        shorter = list(bounds)
        if k > 0:
            shorter[k - 1] -= 1
        if k + 1 < e:
            shorter[k + 1] -= 1
        del shorter[k]
        out.update(blow_up_at(z, k) for z in zero_chains_by_blow_up(tuple(shorter)))
    return frozenset(out)


def test_small_examples():
    assert enumerate_zero_chains(2, [2, 2]) == {(1, 1)}
    assert enumerate_zero_chains(4, [2, 3, 2, 3]) == {(1, 2, 2, 1), (1, 3, 1, 2), (2, 2, 1, 3)}


def test_four_one_has_two_elements():
    # both tuples blow down to [0] and both have a P-resolution partner
    assert enumerate_zero_chains(3, [2, 2, 2]) == {(1, 2, 1), (2, 1, 2)}
    assert [d.n_tuple for d in k_set(4, 1)] == [(1, 2, 1), (2, 1, 2)]


def test_k_set_19_7():
    descs = k_set(19, 7)
    assert [d.n_tuple for d in descs] == [(1, 2, 2, 1), (1, 3, 1, 2), (2, 2, 1, 3)]
    assert descs[2].d_vector == (0, 1, 1, 0)
    assert descs[2].filling_name == "W_{19,7}(2,2,1,3)"


def test_degenerate_length():
    with pytest.raises(DegenerateLength):
        k_set(7, 6)


@settings(max_examples=200)
@given(st.lists(st.integers(min_value=0, max_value=6), min_size=1, max_size=7))
def test_matches_blow_up_generator(bounds):
    assert enumerate_zero_chains(len(bounds), bounds) == set(zero_chains_by_blow_up(tuple(bounds)))


def test_admissible_agrees_with_blow_down():
    for e in range(1, 7):
        for chain in product(range(1, 6), repeat=e):
            assert is_admissible_zero(chain) == bool(is_zero_chain(chain)), chain


def test_admissible_examples():
    assert is_admissible_zero((2, 2, 1, 3))
    assert not is_admissible_zero((1, 1, 1))
    assert is_admissible_zero((0,))
    assert not is_admissible_zero(())


def test_k_set_is_fast_for_long_bounds():
    # all-2 bounds used to be the expensive case
    assert [d.n_tuple for d in k_set(60, 1)] == [(1,) + (2,) * 57 + (1,)]
