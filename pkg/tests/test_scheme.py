import random
from itertools import combinations_with_replacement, product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import all_rows
from vcind.density import check_bound
from vcind.rank import family_rank, min_switch_rank
from vcind.scheme import (
    InexpressibleError,
    SchemeEntry,
    SchemeParams,
    certify,
    decode,
    decode_set,
    encode,
    encode_set,
    minimal_certifiable_rank,
)
from vcind.trace import Row, TraceMatrix
from vcind.zoo import FamilySpec, generate


@pytest.mark.parametrize("n, window", [(0, 0), (1, 0), (2, 1), (3, 2)])
def test_capacity_counts_tables(n, window):
    p = SchemeParams(n, window)
    domain = p.domain()
    assert len(domain) == len(set(domain)) == (n + 1) + n * (window + 1)
    assert p.capacity == 2 ** len(domain)


def test_capacity_values():
    assert SchemeParams(1, 0).capacity == 8
    assert SchemeParams(2, 1).capacity == 128


def test_encode_examples(row):
    e, pos = encode(row("000111"), SchemeParams(1, 0))
    assert pos == (3,)
    assert e.table == {(0, 0): 0, (0, 1): 1, (1, 0): 1}

    e, pos = encode(row("0000000"), SchemeParams(2, 1))
    assert len(pos) == 2
    assert set(e.table.values()) == {0}
    assert decode(e, pos, 7, SchemeParams(2, 1)) == row("0000000")

    e, pos = encode(row("0110"), SchemeParams(1, 1))
    assert pos == (1,)
    assert e.table[(1, 0)] == e.table[(1, 1)] == 1
    assert e.gaps == (0, 0)


def test_encode_refuses_high_rank(row):
    with pytest.raises(InexpressibleError):
        encode(row("010101"), SchemeParams(1, 0))


def test_decode_direct_construction():
    p = SchemeParams(1, 0)
    e = SchemeEntry(gaps=(0, 0), windows=((1,),))
    assert str(decode(e, (0,), 4, p)) == "1000"
    # switch at the last column: the leading gap covers everything before it
    e = SchemeEntry(gaps=(1, 1), windows=((0,),))
    assert str(decode(e, (3,), 4, p)) == "1110"


def test_decode_overlap_later_window_wins():
    p = SchemeParams(2, 2)
    e = SchemeEntry(gaps=(0, 0, 0), windows=((1, 1, 1), (0, 0, 0)))
    assert str(decode(e, (1, 2), 6, p)) == "010000"


@pytest.mark.parametrize("positions", [(2, 1), (0,), (0, 9)])
def test_decode_rejects_malformed_positions(positions):
    p = SchemeParams(2, 0)
    e = SchemeEntry(gaps=(0, 0, 0), windows=((0,), (0,)))
    with pytest.raises(ValueError):
        decode(e, positions, 5, p)


@given(st.lists(st.integers(0, 1), min_size=1, max_size=40).map(Row.from_bits), st.integers(0, 3), st.integers(0, 3))
def test_roundtrip_within_rank(r, window, extra):
    n = min_switch_rank(r, window) + extra
    p = SchemeParams(n, window)
    e, pos = encode(r, p)
    assert len(pos) == n
    assert decode(e, pos, r.width, p) == r


@pytest.mark.parametrize("N, n, window", [(5, 1, 0), (6, 1, 1), (6, 2, 0), (5, 2, 1)])
def test_capacity_bound_by_enumerating_all_decodes(N, n, window):
    # every (table, positions) pair decodes to something; count what appears
    p = SchemeParams(n, window)
    seen = set()
    for gaps in product((0, 1), repeat=n + 1):
        for flat in product((0, 1), repeat=n * (window + 1)):
            wins = tuple(flat[k * (window + 1):(k + 1) * (window + 1)] for k in range(n))
            e = SchemeEntry(gaps, wins)
            for pos in combinations_with_replacement(range(N), n):
                seen.add(decode(e, pos, N, p).value)
    assert len(seen) <= p.bound(N)
    expressible = {r.value for r in all_rows(N) if min_switch_rank(r, window) <= n}
    assert expressible <= seen


def test_encode_set_examples(row):
    e, pos = encode_set(row("00010"), 1)
    assert e.default == 0 and pos == (3,) and e.table == (0, 1)
    e, pos = encode_set(row("1111"), 0)
    assert e.table == (1,) and pos == ()
    e, pos = encode_set(row("01010"), 2)
    assert e.default == 0 and pos == (1, 3)
    with pytest.raises(InexpressibleError):
        encode_set(row("01010"), 1)


@given(st.lists(st.integers(0, 1), min_size=1, max_size=30).map(Row.from_bits), st.integers(0, 3))
def test_set_scheme_roundtrip(r, extra):
    budget = min(r.weight(), r.width - r.weight()) + extra
    e, pos = encode_set(r, budget)
    assert decode_set(e, pos, r.width) == r


@pytest.mark.parametrize("N, m", [(6, 1), (7, 2), (8, 3)])
def test_set_scheme_capacity(N, m):
    count = 0
    for r in all_rows(N):
        try:
            encode_set(r, m)
        except InexpressibleError:
            continue
        count += 1
    assert count <= 2 ** (m + 1) * N**m


def test_certify_threshold():
    m = generate(FamilySpec("threshold"), 16)
    cert = certify(m, SchemeParams(1, 0))
    assert cert.ok
    assert cert.distinct == 17 <= 8 * 16 == cert.bound


def test_certify_full_cube_fails():
    m = TraceMatrix.from_values(8, range(256))
    res = certify(m, SchemeParams(1, 0))
    assert not res.ok
    assert res.rank >= 2
    assert min_switch_rank(res.row, 0) == res.rank


def test_certificate_json_shape_is_stable():
    m = TraceMatrix.from_strings(["0011", "0001"])
    d = certify(m, SchemeParams(1, 0)).to_json()
    assert list(d) == ["n", "l", "R", "width", "rows"]
    # rows are sorted textually; the empty trailing gap is stored as 0
    assert [r["row"] for r in d["rows"]] == ["0001", "0011"]
    assert d["rows"][0] == {"row": "0001", "positions": [3], "table": {"gaps": [0, 0], "windows": [[1]]}}


@pytest.mark.parametrize("window", [0, 1])
def test_certify_iff_family_rank(window):
    rng = random.Random(5)
    for _ in range(60):
        m = TraceMatrix.from_values(10, (rng.getrandbits(10) for _ in range(rng.randint(1, 6))))
        fr = family_rank(m, window)
        for n in range(fr + 2):
            res = certify(m, SchemeParams(n, window))
            assert res.ok == (n >= fr)
            if res.ok:
                assert check_bound(m, SchemeParams(n, window).capacity, n)
        assert minimal_certifiable_rank(m, window) == fr
