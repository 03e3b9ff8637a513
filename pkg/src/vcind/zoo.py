"""Deterministic instance families with known counts and ranks.

Families are described by :class:`FamilySpec`.  The compact string form
used on the command line is ``kind`` or ``kind:n``, and
``product(<spec>,<spec>,<op>)`` for pointwise combinations, e.g.
``product(spikes:1,spikes:2,and)``.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from itertools import combinations
from math import comb

from .trace import OPS, Row, TraceMatrix
from .witness import WitnessPattern, build_witness_family

log = logging.getLogger(__name__)

KINDS = ("threshold", "alt_family", "spikes", "subset_witness", "full", "set_exceptional", "product")
FULL_WIDTH_CAP = 16
MAX_PRODUCT_DEPTH = 4
SUPERPOLYNOMIAL = "superpolynomial"
UNKNOWN = "unknown"

_NEEDS_N = {"alt_family", "spikes", "subset_witness", "set_exceptional"}


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    n: int | None = None
    window: int = 0
    left: "FamilySpec | None" = None
    right: "FamilySpec | None" = None
    op: str | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}; choose from {', '.join(KINDS)}")
        if self.kind in _NEEDS_N:
            if self.n is None or self.n < 0:
                raise ValueError(f"family {self.kind} needs a rank parameter n >= 0")
        if self.window < 0:
            raise ValueError("window must be >= 0")
        if self.kind == "product":
            if self.left is None or self.right is None:
                raise ValueError("product needs two sub-families")
            if self.op not in OPS:
                raise ValueError(f"product op must be one of {sorted(OPS)}, got {self.op!r}")
            if self.depth() > MAX_PRODUCT_DEPTH:
                raise ValueError(f"product nesting depth {self.depth()} exceeds {MAX_PRODUCT_DEPTH}")

    def depth(self) -> int:
        if self.kind != "product":
            return 0
        return 1 + max(self.left.depth(), self.right.depth())

    def __str__(self) -> str:
        if self.kind == "product":
            return f"product({self.left},{self.right},{self.op})"
        return self.kind if self.n is None else f"{self.kind}:{self.n}"


def parse_family(text: str, n: int | None = None) -> FamilySpec:
    """Parse ``kind``, ``kind:n`` or ``product(a,b,op)``."""
    text = text.strip()
    if text.startswith("product(") and text.endswith(")"):
        parts = _split_top(text[len("product("):-1])
        if len(parts) != 3:
            raise ValueError(f"product takes three arguments: {text!r}")
        return FamilySpec("product", left=parse_family(parts[0]), right=parse_family(parts[1]), op=parts[2].strip())
    kind, _, arg = text.partition(":")
    if arg:
        n = int(arg)
    return FamilySpec(kind, n=n)


def _split_top(s: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in s:
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
            continue
        depth += (ch == "(") - (ch == ")")
        cur += ch
    parts.append(cur)
    return parts


def _threshold(N):
    full = (1 << N) - 1
    # 0^k 1^(N-k): ones on positions k..N-1
    return [full & ~((1 << k) - 1) for k in range(N + 1)]


def _alt_family(N, n):
    out = []
    for start in (0, 1):
        for k in range(min(n, N - 1) + 1):
            for changes in combinations(range(N - 1), k):
                v, bit, c = 0, start, 0
                for i in range(N):
                    if bit:
                        v |= 1 << i
                    if c < k and changes[c] == i:
                        bit ^= 1
                        c += 1
                out.append(v)
    return out


def _spikes(N, n):
    return [sum(1 << i for i in s) for k in range(min(n, N) + 1) for s in combinations(range(N), k)]


def _set_exceptional(N, m):
    full = (1 << N) - 1
    low = _spikes(N, m)
    return low + [full ^ v for v in low]


def generate(spec: FamilySpec, N: int) -> TraceMatrix:
    if N < 1:
        raise ValueError("width must be >= 1")
    k = spec.kind
    if k == "threshold":
        values = _threshold(N)
    elif k == "alt_family":
        values = _alt_family(N, spec.n)
    elif k == "spikes":
        values = _spikes(N, spec.n)
    elif k == "subset_witness":
        return build_witness_family(WitnessPattern.canonical(spec.n), N)
    elif k == "full":
        if N > FULL_WIDTH_CAP:
            raise ValueError(f"full family is capped at width {FULL_WIDTH_CAP}, got {N}")
        values = range(1 << N)
    elif k == "set_exceptional":
        values = _set_exceptional(N, spec.n)
    else:
        a, b = generate(spec.left, N), generate(spec.right, N)
        fn, mask = OPS[spec.op], (1 << N) - 1
        bvals = list(b.values())
        values = {fn(x, y, mask) for x in a.values() for y in bvals}
        values = sorted(values)
    return TraceMatrix.from_values(N, values)


def subsample(m: TraceMatrix, k: int, seed: int) -> TraceMatrix:
    """Seeded sample of ``k`` rows, kept in the matrix's own order."""
    log.info("subsampling %d of %d rows with seed %d", k, len(m), seed)
    if k >= len(m):
        return m
    rng = random.Random(seed)
    keep = sorted(rng.sample(range(len(m)), k))
    rows = m.rows
    return TraceMatrix(m.width, (rows[i] for i in keep))


def expected_count(spec: FamilySpec, N: int) -> int | None:
    """Closed-form family size, or ``None`` when there is none (products)."""
    k, n = spec.kind, spec.n
    if k == "threshold":
        return N + 1
    if k == "alt_family":
        return 2 * sum(comb(N - 1, j) for j in range(min(n, N - 1) + 1))
    if k == "spikes":
        return sum(comb(N, j) for j in range(min(n, N) + 1))
    if k == "subset_witness":
        return comb(N, n + 1)
    if k == "full":
        return 2**N
    if k == "set_exceptional":
        near = sum(comb(N, j) for j in range(min(n, N) + 1))
        both = sum(comb(N, j) for j in range(N + 1) if j <= n and N - j <= n)
        return 2 * near - both
    return None


def expected_rank(spec: FamilySpec, window: int = 0) -> int | str:
    """Stabilised switch rank (and density exponent) of the family.

    Products only have the subadditive upper bound, so they report
    ``"unknown"``.
    """
    k = spec.kind
    if k == "threshold":
        return 1
    if k in ("alt_family", "spikes", "set_exceptional"):
        return spec.n
    if k == "subset_witness":
        return spec.n + 1
    if k == "full":
        return SUPERPOLYNOMIAL
    return UNKNOWN


def rank_upper_bound(spec: FamilySpec, window: int = 0) -> int | None:
    """Finite upper bound on the family rank; sums the parts for products."""
    if spec.kind == "product":
        a, b = rank_upper_bound(spec.left, window), rank_upper_bound(spec.right, window)
        return None if a is None or b is None else a + b
    r = expected_rank(spec, window)
    return r if isinstance(r, int) else None
