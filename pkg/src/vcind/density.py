"""Growth exponents of trace counts and the integrality verdict.

The exponent is the least-squares slope of ``log count`` against ``log N``
over the tail half of the width grid.  A family is called superpolynomial
when the consecutive pairwise slopes keep increasing and end above a
ceiling; otherwise an integer verdict needs a small integrality gap, a
small fit residual and a grid spanning at least one decade.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .rank import family_rank
from .scheme import minimal_certifiable_rank
from .trace import TraceMatrix
from .zoo import FamilySpec, expected_count, expected_rank, generate, rank_upper_bound

__all__ = [
    "DensityEstimate",
    "EnumerationCapError",
    "fit",
    "fit_counts",
    "family_counts",
    "check_bound",
    "coincidence_report",
    "default_grid",
    "thread_limit",
]

INTEGRALITY_TOL = 0.15
RESIDUAL_TOL = 0.05
SUPERPOLY_CEILING = 4.0
MAX_ENUMERATED_ROWS = 2_000_000
MAX_PRODUCT_PAIRS = 20_000_000
FULL_GRID = [4, 6, 8, 10, 12]


class EnumerationCapError(RuntimeError):
    """Counting by enumeration would exceed the row cap."""


def thread_limit() -> int:
    try:
        return max(1, int(os.environ.get("VCIND_THREADS", "1")))
    except ValueError:
        return 1


def default_grid(closed_form: bool, spec: FamilySpec | None = None) -> list[int]:
    if spec is not None and spec.kind == "full":
        return list(FULL_GRID)
    top = 4096 if closed_form else 256
    return [2**k for k in range(4, top.bit_length())]


@dataclass
class DensityEstimate:
    exponent: float
    constant_K: float
    grid: list[tuple[int, int]]
    residual: float
    nearest_integer: int
    integrality_gap: float
    verdict: str
    pairwise_slopes: list[float] = field(default_factory=list)
    family: str | None = None
    counts_source: str | None = None

    @property
    def verdict_rank(self) -> int | None:
        if self.verdict.startswith("integer("):
            return int(self.verdict[len("integer("):-1])
        return None

    def to_json(self) -> dict:
        d = asdict(self)
        d["grid"] = [list(p) for p in self.grid]
        return d

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["N", "count", "logN", "logcount"])
        for N, c in self.grid:
            w.writerow([N, c, f"{math.log(N):.12g}", f"{math.log(c):.12g}"])
        return buf.getvalue()


def fit_counts(
    grid: list[tuple[int, int]],
    tolerance: float = INTEGRALITY_TOL,
    residual_tol: float = RESIDUAL_TOL,
    ceiling: float = SUPERPOLY_CEILING,
) -> DensityEstimate:
    """Fit ``count ~ K * N ** exponent`` to ``(N, count)`` pairs."""
    if len(grid) < 4:
        raise ValueError(f"need at least 4 widths to fit, got {len(grid)}")
    Ns = [N for N, _ in grid]
    if any(b <= a for a, b in zip(Ns, Ns[1:])) or Ns[0] < 1:
        raise ValueError(f"grid widths must be positive and strictly increasing: {Ns}")
    if any(c < 1 for _, c in grid):
        raise ValueError("counts must be positive")

    x = np.log(np.array(Ns, dtype=float))
    y = np.array([math.log(c) for _, c in grid])
    tail = len(grid) // 2
    slope, intercept = np.polyfit(x[tail:], y[tail:], 1)
    residual = float(np.max(np.abs(y[tail:] - (intercept + slope * x[tail:]))))
    pairwise = [float(s) for s in np.diff(y) / np.diff(x)]
    nearest = int(round(slope))
    gap = abs(float(slope) - nearest)

    increasing = all(b > a for a, b in zip(pairwise, pairwise[1:]))
    if increasing and pairwise[-1] > ceiling:
        verdict = "superpolynomial"
    elif gap <= tolerance and residual <= residual_tol and Ns[-1] >= 10 * Ns[0]:
        verdict = f"integer({nearest})"
    else:
        verdict = "inconclusive"
    return DensityEstimate(
        exponent=float(slope),
        constant_K=float(math.exp(intercept)),
        grid=[(int(N), int(c)) for N, c in grid],
        residual=residual,
        nearest_integer=nearest,
        integrality_gap=gap,
        verdict=verdict,
        pairwise_slopes=pairwise,
    )


def _enumerated_count(spec: FamilySpec, N: int, cap: int) -> int:
    if spec.kind == "product":
        a, b = _size_hint(spec.left, N), _size_hint(spec.right, N)
        if a is not None and b is not None and a * b > MAX_PRODUCT_PAIRS:
            raise EnumerationCapError(
                f"{spec} at width {N} needs {a * b} row pairs (cap {MAX_PRODUCT_PAIRS})"
            )
    else:
        hint = expected_count(spec, N)
        if hint is not None and hint > cap:
            raise EnumerationCapError(f"{spec} at width {N} has {hint} rows (cap {cap})")
    return len(generate(spec, N))


def _size_hint(spec: FamilySpec, N: int) -> int | None:
    if spec.kind == "product":
        a, b = _size_hint(spec.left, N), _size_hint(spec.right, N)
        return None if a is None or b is None else a * b
    return expected_count(spec, N)


def family_counts(
    spec: FamilySpec, widths: list[int], counts: str = "auto", cap: int = MAX_ENUMERATED_ROWS
) -> tuple[list[tuple[int, int]], str]:
    """Distinct-row counts over ``widths``.

    ``counts`` is ``"closed"``, ``"enumerate"`` or ``"auto"`` (closed form when
    the family has one).  Enumeration refuses, rather than approximates, past
    ``cap`` rows.
    """
    if counts not in ("auto", "closed", "enumerate"):
        raise ValueError(f"unknown counts mode {counts!r}")
    closed = expected_count(spec, widths[0]) is not None
    if counts == "closed" and not closed:
        raise ValueError(f"family {spec} has no closed-form count")
    source = "closed" if counts == "closed" or (counts == "auto" and closed) else "enumerate"

    def one(N: int) -> tuple[int, int]:
        if source == "closed":
            return N, expected_count(spec, N)
        return N, _enumerated_count(spec, N, cap)

    with ThreadPoolExecutor(max_workers=thread_limit()) as pool:
        return list(pool.map(one, widths)), source


def fit(
    spec: FamilySpec,
    grid: list[int] | None = None,
    counts: str = "auto",
    tolerance: float = INTEGRALITY_TOL,
    residual_tol: float = RESIDUAL_TOL,
    ceiling: float = SUPERPOLY_CEILING,
) -> DensityEstimate:
    if grid is None:
        closed = counts != "enumerate" and expected_count(spec, 16) is not None
        grid = default_grid(closed, spec)
    if len(grid) < 4:
        raise ValueError(f"need at least 4 widths to fit, got {len(grid)}")
    pairs, source = family_counts(spec, list(grid), counts)
    est = fit_counts(pairs, tolerance, residual_tol, ceiling)
    est.family = str(spec)
    est.counts_source = source
    return est


def check_bound(m: TraceMatrix, K: float, exponent: float) -> bool:
    """Whether ``m`` has at most ``K * width ** exponent`` distinct rows."""
    if K <= 0 or exponent < 0:
        raise ValueError("need K > 0 and exponent >= 0")
    return len(m) <= K * m.width**exponent


def _stabilisation_widths(spec: FamilySpec, window: int) -> list[int]:
    n = rank_upper_bound(spec, window)
    if n is None:
        n = 3
    start = max(4, 2 * (n + 1) * (window + 1))
    return [start, start + 4, start + 8]


def coincidence_report(spec: FamilySpec, grid: list[int] | None = None, window: int = 0) -> dict:
    """Compare the fitted exponent, the stabilised family rank and the least
    certifiable scheme rank on one family.

    Disagreements are reported in the result, never raised.
    """
    if expected_rank(spec, window) == "superpolynomial":
        raise ValueError(f"family {spec} has no finite rank")
    est = fit(spec, grid)
    fitted = est.verdict_rank

    widths = _stabilisation_widths(spec, window)
    matrices = {N: generate(spec, N) for N in widths}
    ranks = [family_rank(matrices[N], window) for N in widths]
    stable = ranks[-1] if len(set(ranks[-2:])) == 1 else None
    certified = minimal_certifiable_rank(matrices[widths[-1]], window)

    values = [fitted, stable, certified]
    return {
        "family": str(spec),
        "window": window,
        "fitted_exponent": est.exponent,
        "fit_verdict": est.verdict,
        "fitted_integer": fitted,
        "rank_widths": widths,
        "family_ranks": ranks,
        "stabilized_rank": stable,
        "certified_width": widths[-1],
        "certified_rank": certified,
        "expected_rank": expected_rank(spec, window),
        "agree": None not in values and len(set(values)) == 1,
    }
