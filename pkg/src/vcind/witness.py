"""Lower-bound witness families.

A pattern with ``n + 2`` block values and ``n + 1`` separator values yields,
for each ``(n+1)``-subset ``i_0 < ... < i_n`` of the columns, the row that
takes the separator value ``w_k`` at ``i_k`` and block value ``v_k`` strictly
between ``i_{k-1}`` and ``i_k`` (``v_0`` before ``i_0``, ``v_{n+1}`` after
``i_n``).  Distinct subsets give distinct rows, so the family has at least
``C(N, n+1)`` members.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import comb
from typing import Iterator

from .trace import Row, TraceMatrix

log = logging.getLogger(__name__)

__all__ = [
    "WitnessPattern",
    "colex_subsets",
    "build_witness_family",
    "verify_lower_bound",
]


@dataclass(frozen=True)
class WitnessPattern:
    n: int
    block_values: tuple[int, ...]
    separator_values: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be >= 0")
        if len(self.block_values) != self.n + 2:
            raise ValueError(f"need {self.n + 2} block values, got {len(self.block_values)}")
        if len(self.separator_values) != self.n + 1:
            raise ValueError(f"need {self.n + 1} separator values, got {len(self.separator_values)}")
        v, w = self.block_values, self.separator_values
        for k in range(self.n + 1):
            want = 1 - v[k] if v[k] == v[k + 1] else v[k + 1]
            if w[k] != want:
                raise ValueError(
                    f"separator {k} must be {want} for neighbouring blocks ({v[k]}, {v[k + 1]})"
                )

    @classmethod
    def canonical(cls, n: int) -> "WitnessPattern":
        """Zero blocks, one-valued separators: rows are (n+1)-subset indicators."""
        return cls(n, (0,) * (n + 2), (1,) * (n + 1))

    @classmethod
    def from_blocks(cls, block_values) -> "WitnessPattern":
        """Derive the forced separators from the block values."""
        v = tuple(int(b) for b in block_values)
        n = len(v) - 2
        w = tuple(1 - v[k] if v[k] == v[k + 1] else v[k + 1] for k in range(n + 1))
        return cls(n, v, w)

    def row(self, subset: tuple[int, ...], width: int) -> Row:
        bits = []
        k = 0
        for i in range(width):
            if k <= self.n and i == subset[k]:
                bits.append(self.separator_values[k])
                k += 1
            else:
                bits.append(self.block_values[k])
        return Row.from_bits(bits)


def colex_subsets(N: int, k: int) -> Iterator[tuple[int, ...]]:
    """k-subsets of range(N) in colexicographic order."""
    if k == 0:
        yield ()
        return
    for top in range(k - 1, N):
        for rest in colex_subsets(top, k - 1):
            yield rest + (top,)


def build_witness_family(p: WitnessPattern, N: int) -> TraceMatrix:
    if N < p.n + 1:
        raise ValueError(f"width {N} is smaller than n + 1 = {p.n + 1}")
    m = TraceMatrix(N, (p.row(s, N) for s in colex_subsets(N, p.n + 1)))
    if len(m) < comb(N, p.n + 1):
        log.warning("pattern %s gives %d < C(%d, %d) rows; rejected", p, len(m), N, p.n + 1)
        raise ValueError(f"pattern {p} does not give distinct rows at width {N}")
    return m


def verify_lower_bound(m: TraceMatrix, n: int, N: int) -> bool:
    return len(m) >= comb(N, n + 1)
