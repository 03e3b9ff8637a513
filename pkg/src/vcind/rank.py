"""Switch decompositions of rows and the rank of a trace family.

A switch at position ``i`` with window ``l`` frees positions ``i..i+l``
(clipped at the right edge).  Outside the union of windows the row must be
constant on each maximal gap.  The switch rank of a row is the least number
of switches that makes this possible.

In terms of the change mask (bit ``d`` set iff positions ``d`` and ``d+1``
differ) a window at ``i`` absorbs the changes ``d`` in ``i-1..i+l``: that is
``l + 2`` consecutive change slots.  So the switch rank is a minimum cover of
the change slots by intervals of length ``l + 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .trace import CutSet, Row, TraceMatrix

__all__ = [
    "SwitchDecomposition",
    "min_switch_rank",
    "decompose",
    "brute_min_switch_rank",
    "family_rank",
    "joint_cuts",
    "BRUTE_WIDTH_LIMIT",
]

BRUTE_WIDTH_LIMIT = 16


@dataclass(frozen=True)
class SwitchDecomposition:
    width: int
    window: int
    positions: tuple[int, ...]
    window_bits: tuple[tuple[int, ...], ...]
    gap_values: tuple[int, ...]

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.positions, self.positions[1:])):
            raise ValueError(f"switch positions must be strictly increasing: {self.positions}")
        if self.positions and not (0 <= self.positions[0] and self.positions[-1] < self.width):
            raise ValueError(f"switch positions out of range for width {self.width}")
        if len(self.window_bits) != len(self.positions):
            raise ValueError("one window per switch position")
        if len(self.gap_values) != len(self.positions) + 1:
            raise ValueError("need n + 1 gap values for n switches")

    @property
    def n(self) -> int:
        return len(self.positions)

    def gaps(self) -> list[range]:
        """Gap ``k`` lies strictly between window ``k`` and window ``k + 1``.

        The outer gaps use the virtual ends ``-1`` and ``width``; a gap may be
        empty.
        """
        ends = [-1] + [p + self.window for p in self.positions]
        starts = list(self.positions) + [self.width]
        return [range(e + 1, max(e + 1, s)) for e, s in zip(ends, starts)]

    def reconstruct(self) -> Row:
        bits = [0] * self.width
        for gap, v in zip(self.gaps(), self.gap_values):
            for y in gap:
                bits[y] = v
        for p, wb in zip(self.positions, self.window_bits):
            for j, b in enumerate(wb):
                bits[p + j] = b
        return Row.from_bits(bits)


def _greedy_positions(r: Row, window: int) -> list[int]:
    # leftmost uncovered change at slot d: push the window right until it
    # starts at d + 1, the last start that still absorbs d
    if window < 0:
        raise ValueError(f"window must be >= 0, got {window}")
    d = r.change_mask()
    positions = []
    while d:
        low = (d & -d).bit_length() - 1
        positions.append(low + 1)
        d &= ~((1 << (low + window + 2)) - 1)
    return positions


def min_switch_rank(r: Row, window: int) -> int:
    return len(_greedy_positions(r, window))


def decompose(r: Row, window: int) -> SwitchDecomposition:
    """A minimal switch decomposition of ``r`` that reproduces it exactly.

    Windows are placed as far right as legality permits, so empty gaps take
    the value 0.
    """
    positions = _greedy_positions(r, window)
    n, N = len(positions), r.width
    window_bits = tuple(
        tuple(r[j] for j in range(p, min(p + window, N - 1) + 1)) for p in positions
    )
    skeleton = SwitchDecomposition(N, window, tuple(positions), window_bits, (0,) * (n + 1))
    gap_values = tuple(r[g.start] if len(g) else 0 for g in skeleton.gaps())
    return SwitchDecomposition(N, window, tuple(positions), window_bits, gap_values)


def brute_min_switch_rank(r: Row, window: int, limit: int = BRUTE_WIDTH_LIMIT) -> int:
    """Exact switch rank by trying every position tuple of every size."""
    N = r.width
    if N > limit:
        raise ValueError(f"width {N} exceeds the exhaustive bound {limit}")
    if window < 0:
        raise ValueError(f"window must be >= 0, got {window}")
    full = (1 << N) - 1
    cover = [((1 << (window + 1)) - 1) << p & full for p in range(N)]
    bits = r.bits()
    # adjacent positions both outside every window must agree
    for n in range(N + 1):
        for combo in combinations(range(N), n):
            freed = 0
            for p in combo:
                freed |= cover[p]
            if all(
                bits[y] == bits[y + 1]
                for y in range(N - 1)
                if not (freed >> y) & 1 and not (freed >> (y + 1)) & 1
            ):
                return n
    raise AssertionError("unreachable: N switches always suffice")


def family_rank(m: TraceMatrix, window: int) -> int:
    return max(min_switch_rank(r, window) for r in m)


def joint_cuts(m: TraceMatrix) -> CutSet:
    """Union of the rows' change points: the least cut set that makes every
    row constant on each class."""
    d = 0
    for r in m:
        d |= r.change_mask()
    return CutSet(m.width, tuple(g for g in range(m.width - 1) if (d >> g) & 1))
