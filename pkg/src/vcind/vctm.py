"""Reader and writer for the ``vctm v1`` trace-matrix text format.

::

    vctm 1
    <width> <row count>
    <row 0 as width characters over 0/1>
    ...
"""

from __future__ import annotations

import io
from pathlib import Path
from typing import TextIO

from .trace import Row, TraceMatrix

MAGIC = "vctm 1"


class VctmFormatError(ValueError):
    """Raised when a vctm file violates the strict format."""


def dumps(m: TraceMatrix) -> str:
    lines = [MAGIC, f"{m.width} {len(m)}"]
    lines.extend(str(r) for r in m)
    return "\n".join(lines) + "\n"


def dump(m: TraceMatrix, fh: TextIO) -> None:
    fh.write(dumps(m))


def write(m: TraceMatrix, path: str | Path) -> None:
    Path(path).write_text(dumps(m))


def loads(text: str, dedup: bool = False) -> TraceMatrix:
    """Parse a vctm document.

    Parsing is strict: wrong counts, stray characters and duplicate rows are
    errors.  ``dedup=True`` tolerates duplicate rows and drops them.
    """
    lines = text.splitlines()
    # a single trailing blank line is the normal file ending
    while lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].strip() != MAGIC:
        raise VctmFormatError(f"line 1: expected {MAGIC!r}")
    if len(lines) < 2:
        raise VctmFormatError("line 2: missing '<width> <rows>' header")
    header = lines[1].split()
    if len(header) != 2 or not all(h.isdigit() for h in header):
        raise VctmFormatError(f"line 2: expected two nonnegative integers, got {lines[1]!r}")
    width, count = int(header[0]), int(header[1])
    if width < 1:
        raise VctmFormatError("line 2: width must be >= 1")
    if count < 1:
        raise VctmFormatError("line 2: a matrix needs at least one row")
    body = lines[2:]
    if len(body) != count:
        raise VctmFormatError(f"header declares {count} rows, found {len(body)}")
    rows = []
    seen = set()
    for lineno, line in enumerate(body, start=3):
        if len(line) != width:
            raise VctmFormatError(f"line {lineno}: expected {width} characters, got {len(line)}")
        if line.strip("01"):
            raise VctmFormatError(f"line {lineno}: stray characters in {line!r}")
        if line in seen:
            if dedup:
                continue
            raise VctmFormatError(f"line {lineno}: duplicate row {line}")
        seen.add(line)
        rows.append(Row.from_str(line))
    return TraceMatrix(width, rows)


def load(fh: TextIO, dedup: bool = False) -> TraceMatrix:
    return loads(fh.read(), dedup=dedup)


def read(path: str | Path, dedup: bool = False) -> TraceMatrix:
    return loads(Path(path).read_text(), dedup=dedup)


def roundtrip(m: TraceMatrix) -> TraceMatrix:
    buf = io.StringIO()
    dump(m, buf)
    return loads(buf.getvalue())
