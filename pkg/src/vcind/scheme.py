"""Defining schemes: encode a row as switch positions plus a finite table.

With ``n`` switches and window ``l`` the table domain is

    X = {(0, k) : k = 0..n}  ∪  {(k, j) : k = 1..n, j = 0..l}

where ``(0, k)`` holds the value on gap ``k`` and ``(k, j)`` the value at
offset ``j`` inside window ``k``.  There are ``2 ** |X|`` tables, so any
family encodable at width ``N`` has at most ``2 ** |X| * N ** n`` members.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .rank import decompose, min_switch_rank
from .trace import Row, TraceMatrix

__all__ = [
    "InexpressibleError",
    "SchemeParams",
    "SchemeEntry",
    "SetSchemeEntry",
    "BoundCertificate",
    "CertificationFailure",
    "encode",
    "decode",
    "encode_set",
    "decode_set",
    "certify",
    "minimal_certifiable_rank",
]


class InexpressibleError(ValueError):
    """The row needs more switches (or exceptions) than the scheme allows."""


@dataclass(frozen=True)
class SchemeParams:
    n: int
    window: int

    def __post_init__(self):
        if self.n < 0 or self.window < 0:
            raise ValueError(f"scheme parameters must be >= 0, got n={self.n}, l={self.window}")

    @property
    def domain_size(self) -> int:
        return (self.n + 1) + self.n * (self.window + 1)

    @property
    def capacity(self) -> int:
        """R(n, l): the number of distinct tables."""
        return 2 ** (self.n * (self.window + 1) + self.n + 1)

    def domain(self) -> list[tuple[int, int]]:
        return [(0, k) for k in range(self.n + 1)] + [
            (k, j) for k in range(1, self.n + 1) for j in range(self.window + 1)
        ]

    def bound(self, width: int) -> int:
        return self.capacity * width**self.n


@dataclass(frozen=True)
class SchemeEntry:
    gaps: tuple[int, ...]
    windows: tuple[tuple[int, ...], ...]

    @property
    def table(self) -> dict[tuple[int, int], int]:
        out = {(0, k): v for k, v in enumerate(self.gaps)}
        for k, wb in enumerate(self.windows, start=1):
            for j, v in enumerate(wb):
                out[(k, j)] = v
        return out

    def to_json(self) -> dict:
        return {"gaps": list(self.gaps), "windows": [list(w) for w in self.windows]}


@dataclass(frozen=True)
class SetSchemeEntry:
    budget: int
    table: tuple[int, ...]

    @property
    def default(self) -> int:
        return self.table[0]


def encode(r: Row, p: SchemeParams) -> tuple[SchemeEntry, tuple[int, ...]]:
    """Encode ``r`` with exactly ``p.n`` switch positions.

    Rows needing fewer switches repeat their last position (position 0 for a
    constant row); the trailing, now empty, gaps copy the last real gap value.
    """
    dec = decompose(r, p.window)
    s = dec.n
    if s > p.n:
        raise InexpressibleError(f"row {r} needs {s} switches with window {p.window}, scheme allows {p.n}")
    pad_pos = dec.positions[-1] if s else 0
    positions = dec.positions + (pad_pos,) * (p.n - s)

    windows = []
    for pos in positions:
        windows.append(
            tuple(r[pos + j] if pos + j < r.width else 0 for j in range(p.window + 1))
        )
    last_gap = dec.gap_values[-1]
    gaps = dec.gap_values[:-1] + (last_gap,) * (p.n - s + 1)
    return SchemeEntry(tuple(gaps), tuple(windows)), positions


def decode(e: SchemeEntry, positions: Sequence[int], width: int, p: SchemeParams) -> Row:
    """Rebuild the row defined by a table and switch positions.

    A position inside some window takes that window's value, the highest-index
    window winning on overlap; any other position ``y`` lies in gap
    ``#{k : positions[k] < y}``.
    """
    positions = tuple(positions)
    if len(positions) != p.n:
        raise ValueError(f"expected {p.n} positions, got {len(positions)}")
    if any(b < a for a, b in zip(positions, positions[1:])):
        raise ValueError(f"positions must be nondecreasing: {positions}")
    if positions and not (0 <= positions[0] and positions[-1] < width):
        raise ValueError(f"positions {positions} out of range for width {width}")
    if len(e.gaps) != p.n + 1 or len(e.windows) != p.n or any(len(w) != p.window + 1 for w in e.windows):
        raise ValueError("table shape does not match scheme parameters")

    bits = []
    for y in range(width):
        bit = None
        for k in range(p.n - 1, -1, -1):
            off = y - positions[k]
            if 0 <= off <= p.window:
                bit = e.windows[k][off]
                break
        if bit is None:
            bit = e.gaps[sum(1 for q in positions if q < y)]
        bits.append(bit)
    return Row.from_bits(bits)


def encode_set(r: Row, budget: int) -> tuple[SetSchemeEntry, tuple[int, ...]]:
    """Encode ``r`` as a default bit plus at most ``budget`` exceptions.

    The default is the majority value (0 on a tie); unused exception slots
    repeat the last exceptional position, or point at position 0.
    """
    ones = r.weight()
    default = 1 if ones > r.width - ones else 0
    exceptional = tuple(i for i in range(r.width) if r[i] != default)
    if len(exceptional) > budget:
        raise InexpressibleError(
            f"row {r} has {len(exceptional)} exceptional positions, budget is {budget}"
        )
    pad = exceptional[-1] if exceptional else 0
    positions = exceptional + (pad,) * (budget - len(exceptional))
    table = (default,) + tuple(r[z] for z in positions)
    return SetSchemeEntry(budget, table), positions


def decode_set(e: SetSchemeEntry, positions: Sequence[int], width: int) -> Row:
    if len(positions) != e.budget or len(e.table) != e.budget + 1:
        raise ValueError("set-scheme shape mismatch")
    bits = [e.default] * width
    for i, z in enumerate(positions, start=1):
        if not 0 <= z < width:
            raise ValueError(f"exceptional position {z} out of range")
        bits[z] = e.table[i]
    return Row.from_bits(bits)


@dataclass(frozen=True)
class BoundCertificate:
    params: SchemeParams
    width: int
    distinct: int
    encodings: tuple[tuple[Row, tuple[int, ...], SchemeEntry], ...] = field(repr=False)

    ok = True

    @property
    def bound(self) -> int:
        return self.params.bound(self.width)

    def to_json(self) -> dict:
        return {
            "n": self.params.n,
            "l": self.params.window,
            "R": self.params.capacity,
            "width": self.width,
            "rows": [
                {"row": str(r), "positions": list(pos), "table": e.to_json()}
                for r, pos, e in self.encodings
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


@dataclass(frozen=True)
class CertificationFailure:
    params: SchemeParams
    width: int
    row: Row
    rank: int

    ok = False

    def to_json(self) -> dict:
        return {
            "n": self.params.n,
            "l": self.params.window,
            "width": self.width,
            "failure": {"row": str(self.row), "rank": self.rank},
        }


def certify(m: TraceMatrix, p: SchemeParams) -> BoundCertificate | CertificationFailure:
    """Encode every row of ``m``; return a certificate or the first row (in
    sorted order) the scheme cannot express."""
    encodings = []
    for r in m.sorted_rows():
        try:
            e, pos = encode(r, p)
        except InexpressibleError:
            return CertificationFailure(p, m.width, r, min_switch_rank(r, p.window))
        encodings.append((r, pos, e))
    cert = BoundCertificate(p, m.width, len(m), tuple(encodings))
    if cert.distinct > cert.bound:
        raise RuntimeError(f"counting bound violated: {cert.distinct} > {cert.bound}")
    return cert


def minimal_certifiable_rank(m: TraceMatrix, window: int) -> int:
    n = 0
    while not certify(m, SchemeParams(n, window)).ok:
        n += 1
    return n
