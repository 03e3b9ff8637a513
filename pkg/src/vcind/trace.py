"""Rows, trace matrices and cut sets over a finite ordered index set.

A row is the truth-value pattern of one parameter against an ordered
sequence of columns.  Rows are packed into a Python ``int``: bit ``i`` holds
position ``i``.  The textual form lists position 0 first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

__all__ = [
    "Row",
    "TraceMatrix",
    "CutSet",
    "OPS",
    "distinct_count",
    "alternation_number",
    "change_points",
    "restrict_columns",
    "restrict_row",
    "pointwise",
]


def _mask(width: int) -> int:
    return (1 << width) - 1


@dataclass(frozen=True, slots=True)
class Row:
    """A binary trace of fixed width, stored as a packed bit vector."""

    width: int
    value: int

    def __post_init__(self):
        if self.width < 1:
            raise ValueError(f"row width must be >= 1, got {self.width}")
        if self.value < 0 or self.value >> self.width:
            raise ValueError(f"value {self.value} does not fit in width {self.width}")

    @classmethod
    def from_str(cls, text: str) -> "Row":
        if not text or any(ch not in "01" for ch in text):
            raise ValueError(f"row must be a nonempty string over 0/1, got {text!r}")
        return cls(len(text), int(text[::-1], 2))

    @classmethod
    def from_bits(cls, bits: Iterable[int | bool]) -> "Row":
        bits = list(bits)
        value = 0
        for i, b in enumerate(bits):
            if b not in (0, 1, True, False):
                raise ValueError(f"bit at position {i} is not boolean: {b!r}")
            if b:
                value |= 1 << i
        return cls(len(bits), value)

    @classmethod
    def constant(cls, width: int, bit: int) -> "Row":
        return cls(width, _mask(width) if bit else 0)

    def __len__(self) -> int:
        return self.width

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self.width
        if not 0 <= i < self.width:
            raise IndexError(i)
        return (self.value >> i) & 1

    def __iter__(self):
        v = self.value
        for _ in range(self.width):
            yield v & 1
            v >>= 1

    def __str__(self) -> str:
        return format(self.value, f"0{self.width}b")[::-1]

    def bits(self) -> tuple[int, ...]:
        return tuple(self)

    def change_mask(self) -> int:
        """Bit ``i`` is set iff positions ``i`` and ``i+1`` differ."""
        return (self.value ^ (self.value >> 1)) & _mask(self.width - 1)

    def weight(self) -> int:
        return self.value.bit_count()


class TraceMatrix:
    """A deduplicated, insertion-ordered family of rows of one width.

    Duplicates are dropped on construction, so ``len(m)`` is always the
    number of distinct traces.
    """

    __slots__ = ("_width", "_rows", "_values")

    def __init__(self, width: int, rows: Iterable[Row]):
        if width < 1:
            raise ValueError(f"matrix width must be >= 1, got {width}")
        seen: dict[int, Row] = {}
        for r in rows:
            if r.width != width:
                raise ValueError(f"row {r} has width {r.width}, expected {width}")
            seen.setdefault(r.value, r)
        if not seen:
            raise ValueError("a trace matrix needs at least one row")
        self._width = width
        self._rows = tuple(seen.values())
        self._values = frozenset(seen)

    @classmethod
    def from_values(cls, width: int, values: Iterable[int]) -> "TraceMatrix":
        return cls(width, (Row(width, v) for v in values))

    @classmethod
    def from_strings(cls, rows: Iterable[str]) -> "TraceMatrix":
        parsed = [Row.from_str(s) for s in rows]
        if not parsed:
            raise ValueError("a trace matrix needs at least one row")
        return cls(parsed[0].width, parsed)

    @property
    def width(self) -> int:
        return self._width

    @property
    def rows(self) -> tuple[Row, ...]:
        return self._rows

    def values(self) -> frozenset[int]:
        return self._values

    def __len__(self) -> int:
        return len(self._rows)

    def __iter__(self):
        return iter(self._rows)

    def __contains__(self, row: object) -> bool:
        return isinstance(row, Row) and row.width == self._width and row.value in self._values

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TraceMatrix):
            return NotImplemented
        return self._width == other._width and self._values == other._values

    def __hash__(self) -> int:
        return hash((self._width, self._values))

    def __repr__(self) -> str:
        shown = ", ".join(str(r) for r in self._rows[:4])
        more = ", ..." if len(self._rows) > 4 else ""
        return f"TraceMatrix(width={self._width}, rows=[{shown}{more}], count={len(self)})"

    def sorted_rows(self) -> list[Row]:
        return sorted(self._rows, key=str)


@dataclass(frozen=True, slots=True)
class CutSet:
    """Cuts between adjacent indices of ``0..width-1``.

    Cut ``g`` (stored as the integer gap index) sits at ``g + 0.5``, between
    positions ``g`` and ``g + 1``.
    """

    width: int
    gaps: tuple[int, ...]

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("cut set width must be >= 1")
        if any(b <= a for a, b in zip(self.gaps, self.gaps[1:])):
            raise ValueError(f"cuts must be strictly increasing: {self.gaps}")
        if self.gaps and not (0 <= self.gaps[0] and self.gaps[-1] <= self.width - 2):
            raise ValueError(f"cuts {self.gaps} fall outside the gaps of width {self.width}")

    @classmethod
    def from_halves(cls, width: int, cuts: Iterable[float]) -> "CutSet":
        gaps = []
        for c in sorted(set(cuts)):
            g = c - 0.5
            if g != int(g):
                raise ValueError(f"cut {c} is not a half-integer")
            gaps.append(int(g))
        return cls(width, tuple(gaps))

    @property
    def cuts(self) -> tuple[float, ...]:
        return tuple(g + 0.5 for g in self.gaps)

    def __len__(self) -> int:
        return len(self.gaps)

    def __contains__(self, cut: float) -> bool:
        return (cut - 0.5) in self.gaps

    def classes(self) -> list[range]:
        """The convex classes of the induced equivalence, left to right."""
        out, start = [], 0
        for g in self.gaps:
            out.append(range(start, g + 1))
            start = g + 1
        out.append(range(start, self.width))
        return out

    def equivalent(self, i: int, j: int) -> bool:
        lo, hi = min(i, j), max(i, j)
        return not any(lo <= g < hi for g in self.gaps)

    def is_constant_on(self, row: Row) -> bool:
        return all(len({row[i] for i in cls}) == 1 for cls in self.classes())

    def union(self, other: "CutSet") -> "CutSet":
        if other.width != self.width:
            raise ValueError("cannot merge cut sets of different widths")
        return CutSet(self.width, tuple(sorted(set(self.gaps) | set(other.gaps))))


def distinct_count(m: TraceMatrix) -> int:
    return len(m)


def alternation_number(r: Row) -> int:
    """Number of adjacent positions where the row changes value.

    This is also the size of the smallest cut set on whose classes ``r`` is
    constant.
    """
    return r.change_mask().bit_count()


def change_points(r: Row) -> CutSet:
    d = r.change_mask()
    return CutSet(r.width, tuple(i for i in range(r.width - 1) if (d >> i) & 1))


def restrict_row(r: Row, columns: Sequence[int]) -> Row:
    _check_columns(columns, r.width)
    v = r.value
    out = 0
    for k, j in enumerate(columns):
        out |= ((v >> j) & 1) << k
    return Row(len(columns), out)


def restrict_columns(m: TraceMatrix, columns: Sequence[int]) -> TraceMatrix:
    """Restrict every row to an increasing subsequence of columns."""
    _check_columns(columns, m.width)
    return TraceMatrix(len(columns), (restrict_row(r, columns) for r in m))


def _check_columns(columns: Sequence[int], width: int) -> None:
    if len(columns) == 0:
        raise ValueError("column selection must be nonempty")
    for a, b in zip(columns, columns[1:]):
        if b <= a:
            raise ValueError(f"column selection must be strictly increasing: {list(columns)}")
    if columns[0] < 0 or columns[-1] >= width:
        raise ValueError(f"column index out of range for width {width}: {list(columns)}")


def _truth_table_op(table: tuple[int, int, int, int]) -> Callable[[int, int, int], int]:
    # table[2*a + b] is the output on inputs (a, b)
    def op(x: int, y: int, mask: int) -> int:
        nx, ny = ~x & mask, ~y & mask
        out = 0
        if table[0]:
            out |= nx & ny
        if table[1]:
            out |= nx & y
        if table[2]:
            out |= x & ny
        if table[3]:
            out |= x & y
        return out

    return op


# the ten binary operations that depend on both arguments
OPS: dict[str, Callable[[int, int, int], int]] = {
    "and": _truth_table_op((0, 0, 0, 1)),
    "or": _truth_table_op((0, 1, 1, 1)),
    "xor": _truth_table_op((0, 1, 1, 0)),
    "nand": _truth_table_op((1, 1, 1, 0)),
    "nor": _truth_table_op((1, 0, 0, 0)),
    "xnor": _truth_table_op((1, 0, 0, 1)),
    "implies": _truth_table_op((1, 1, 0, 1)),
    "converse": _truth_table_op((1, 0, 1, 1)),
    "nimplies": _truth_table_op((0, 0, 1, 0)),
    "nconverse": _truth_table_op((0, 1, 0, 0)),
}


def pointwise(r1: Row, r2: Row, op: str) -> Row:
    if r1.width != r2.width:
        raise ValueError("pointwise combination needs rows of equal width")
    try:
        fn = OPS[op]
    except KeyError:
        raise ValueError(f"unknown boolean op {op!r}; choose from {sorted(OPS)}") from None
    return Row(r1.width, fn(r1.value, r2.value, _mask(r1.width)))

