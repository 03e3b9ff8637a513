import math

import pytest

from vcind.density import (
    EnumerationCapError,
    check_bound,
    coincidence_report,
    default_grid,
    family_counts,
    fit,
    fit_counts,
    thread_limit,
)
from vcind.trace import TraceMatrix
from vcind.zoo import FamilySpec, generate, parse_family


def test_default_grids():
    assert default_grid(True) == [16, 32, 64, 128, 256, 512, 1024, 2048, 4096]
    assert default_grid(False) == [16, 32, 64, 128, 256]
    assert default_grid(True, FamilySpec("full")) == [4, 6, 8, 10, 12]


def test_threshold_fit():
    est = fit(FamilySpec("threshold"))
    assert 0.9 <= est.exponent <= 1.1
    assert est.verdict == "integer(1)" and est.verdict_rank == 1
    assert est.counts_source == "closed"


def test_alt_family_2_fit():
    est = fit(FamilySpec("alt_family", n=2))
    assert 1.85 <= est.exponent <= 2.15
    assert est.verdict == "integer(2)"


def test_full_is_superpolynomial():
    est = fit(FamilySpec("full"), [4, 6, 8, 10, 12])
    assert est.verdict == "superpolynomial"
    assert est.verdict_rank is None
    assert all(b > a for a, b in zip(est.pairwise_slopes, est.pairwise_slopes[1:]))


def test_fit_on_exact_power_law():
    grid = [(N, 7 * N**3) for N in (10, 20, 40, 80, 160)]
    est = fit_counts(grid)
    assert est.exponent == pytest.approx(3.0, abs=1e-9)
    assert est.constant_K == pytest.approx(7.0, rel=1e-9)
    assert est.residual == pytest.approx(0.0, abs=1e-9)


def test_short_span_is_never_integer():
    grid = [(N, N**2) for N in (4, 5, 6, 7, 8)]
    assert fit_counts(grid).verdict == "inconclusive"


def test_fractional_exponent_is_inconclusive():
    grid = [(N, round(N**1.5)) for N in default_grid(True)]
    assert fit_counts(grid).verdict == "inconclusive"


@pytest.mark.parametrize(
    "grid",
    [[(16, 1), (32, 2), (64, 4)], [(16, 1), (16, 2), (64, 4), (128, 8)], [(16, 0), (32, 2), (64, 4), (128, 8)]],
)
def test_fit_rejects_bad_grids(grid):
    with pytest.raises(ValueError):
        fit_counts(grid)


def test_enumerated_counts_agree_with_closed():
    spec = FamilySpec("spikes", n=2)
    closed, _ = family_counts(spec, [16, 32, 64, 128], "closed")
    enumerated, src = family_counts(spec, [16, 32, 64, 128], "enumerate")
    assert closed == enumerated and src == "enumerate"


def test_enumeration_cap_refuses():
    with pytest.raises(EnumerationCapError):
        family_counts(FamilySpec("subset_witness", n=3), [256], "enumerate", cap=1000)


def test_duplicate_rows_do_not_change_counts():
    a = TraceMatrix.from_strings(["0011", "0011", "0111"])
    assert len(a) == 2
    assert check_bound(a, 2, 0)


def test_check_bound_examples():
    assert check_bound(generate(FamilySpec("threshold"), 16), 2, 1)
    assert not check_bound(TraceMatrix.from_values(8, range(256)), 1, 2)
    m = generate(FamilySpec("spikes", n=2), 9)
    assert check_bound(m, len(m), 0)
    with pytest.raises(ValueError):
        check_bound(m, 0, 1)


def test_csv_output():
    est = fit(FamilySpec("threshold"), [16, 32, 64, 160])
    lines = est.to_csv().splitlines()
    assert lines[0] == "N,count,logN,logcount"
    N, count, logN, logcount = lines[1].split(",")
    assert (int(N), int(count)) == (16, 17)
    assert float(logcount) == pytest.approx(math.log(17))


@pytest.mark.parametrize(
    "spec, n", [("threshold", 1), ("spikes:2", 2), ("alt_family:3", 3)]
)
def test_coincidence(spec, n):
    rep = coincidence_report(parse_family(spec))
    assert (rep["fitted_integer"], rep["stabilized_rank"], rep["certified_rank"]) == (n, n, n)
    assert rep["agree"]


def test_coincidence_with_window():
    rep = coincidence_report(parse_family("alt_family:2"), window=1)
    assert rep["agree"] and rep["certified_rank"] == 2


def test_coincidence_refuses_superpolynomial():
    with pytest.raises(ValueError):
        coincidence_report(FamilySpec("full"))


def test_thread_limit(monkeypatch):
    monkeypatch.setenv("VCIND_THREADS", "3")
    assert thread_limit() == 3
    monkeypatch.setenv("VCIND_THREADS", "junk")
    assert thread_limit() == 1
    monkeypatch.setenv("VCIND_THREADS", "4")
    assert fit(FamilySpec("threshold")).verdict == "integer(1)"
