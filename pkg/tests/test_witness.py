from itertools import combinations, product
from math import comb

import pytest

from vcind.rank import family_rank
from vcind.witness import WitnessPattern, build_witness_family, colex_subsets, verify_lower_bound


def test_canonical_n1_is_all_pair_indicators():
    m = build_witness_family(WitnessPattern.canonical(1), 6)
    want = {sum(1 << i for i in s) for s in combinations(range(6), 2)}
    assert len(m) == 15 and m.values() == want
    assert verify_lower_bound(m, 1, 6)


def test_canonical_n0_is_unit_indicators():
    m = build_witness_family(WitnessPattern.canonical(0), 4)
    assert sorted(str(r) for r in m) == ["0001", "0010", "0100", "1000"]


def test_canonical_n2_width_7():
    m = build_witness_family(WitnessPattern.canonical(2), 7)
    assert len(m) == comb(7, 3) == 35
    assert verify_lower_bound(m, 2, 7)


def test_degenerate_width():
    m = build_witness_family(WitnessPattern.canonical(3), 4)
    assert [str(r) for r in m] == ["1111"]
    assert verify_lower_bound(m, 3, 4)
    with pytest.raises(ValueError):
        build_witness_family(WitnessPattern.canonical(3), 3)


def test_alternating_blocks_pattern():
    p = WitnessPattern.from_blocks((0, 1, 0))
    assert p.separator_values == (1, 0)
    m = build_witness_family(p, 5)
    assert len(m) >= comb(5, 2)


def test_illegal_separator_rejected():
    with pytest.raises(ValueError):
        WitnessPattern(1, (0, 0, 0), (0, 1))
    with pytest.raises(ValueError):
        WitnessPattern(1, (0, 0), (1, 1))


def test_colex_order():
    assert list(colex_subsets(4, 2)) == [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]
    assert sorted(colex_subsets(7, 3)) == list(combinations(range(7), 3))


@pytest.mark.parametrize("n", range(4))
def test_every_legal_pattern_gives_distinct_rows(n):
    for blocks in product((0, 1), repeat=n + 2):
        p = WitnessPattern.from_blocks(blocks)
        for N in range(n + 1, 11):
            m = build_witness_family(p, N)
            assert len(m) == comb(N, n + 1)


@pytest.mark.parametrize("n", range(4))
def test_canonical_family_rank_is_n_plus_one(n):
    m = build_witness_family(WitnessPattern.canonical(n), 3 * (n + 1) + 2)
    assert family_rank(m, 0) == n + 1
