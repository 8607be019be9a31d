"""Bipartite Boolean functions as bit matrices.

A function f : {0,1}^nx x {0,1}^ny -> {0,1} is stored as its
communication matrix: row index is Alice's input x, column index is
Bob's input y, both read as big-endian integers.  Rows are bit-packed
into Python integers (bit y of ``rows[x]`` is the entry at (x, y)),
which keeps row XOR and row comparisons word-parallel for free.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable


@dataclass(frozen=True)
class TruthTable:
    """Bit matrix of a bipartite Boolean function."""

    nx: int
    ny: int
    rows: tuple[int, ...]  # rows[x] packs the 2^ny entries of row x

    def __post_init__(self):
        if self.nx < 0 or self.ny < 0:
            raise ValueError("negative input width")
        if len(self.rows) != 1 << self.nx:
            raise ValueError("row count must be 2^nx")
        mask = (1 << (1 << self.ny)) - 1
        for r in self.rows:
            if r < 0 or r & ~mask:
                raise ValueError("row has bits outside the 2^ny columns")

    @property
    def n_rows(self) -> int:
        return 1 << self.nx

    @property
    def n_cols(self) -> int:
        return 1 << self.ny

    def entry(self, x: int, y: int) -> int:
        return (self.rows[x] >> y) & 1

    def __call__(self, x: int, y: int) -> int:
        return self.entry(x, y)

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.rows)

    def row_bits(self, x: int) -> tuple[int, ...]:
        return tuple((self.rows[x] >> y) & 1 for y in range(self.n_cols))

    def transpose(self) -> "TruthTable":
        cols = []
        for y in range(self.n_cols):
            c = 0
            for x in range(self.n_rows):
                c |= self.entry(x, y) << x
            cols.append(c)
        return TruthTable(self.ny, self.nx, tuple(cols))

    def xor(self, other: "TruthTable") -> "TruthTable":
        if (self.nx, self.ny) != (other.nx, other.ny):
            raise ValueError("dimension mismatch")
        return TruthTable(self.nx, self.ny,
                          tuple(a ^ b for a, b in zip(self.rows, other.rows)))


def from_function(nx: int, ny: int, f: Callable[[int, int], int]) -> TruthTable:
    rows = []
    for x in range(1 << nx):
        r = 0
        for y in range(1 << ny):
            r |= (f(x, y) & 1) << y
        rows.append(r)
    return TruthTable(nx, ny, tuple(rows))


def from_entries(nx: int, ny: int, entries: Iterable[Iterable[int]]) -> TruthTable:
    rows = []
    for row in entries:
        r = 0
        for y, v in enumerate(row):
            r |= (v & 1) << y
        rows.append(r)
    return TruthTable(nx, ny, tuple(rows))


def bit_count(v: int) -> int:
    return bin(v).count("1")


def and_table() -> TruthTable:
    """1-bit AND: a single 1 at (1,1).  Also the CHSH winning predicate."""
    return from_function(1, 1, lambda x, y: x & y)


def xor_table() -> TruthTable:
    return from_function(1, 1, lambda x, y: x ^ y)


def ip_table(n: int) -> TruthTable:
    """Inner product mod 2 on n-bit inputs."""
    return from_function(n, n, lambda x, y: bit_count(x & y) & 1)


def disj_table(n: int) -> TruthTable:
    """Disjointness (intersection non-empty) on n-bit inputs."""
    return from_function(n, n, lambda x, y: 1 if x & y else 0)


def parse_truth_table(text: str) -> TruthTable:
    """Parse the line-oriented truth-table format.

    Line 1 is "nx ny"; then 2^nx lines of 2^ny characters from {0,1}.
    Blank and '#'-prefixed lines are ignored.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty truth-table file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("header must be 'nx ny'")
    nx, ny = int(head[0]), int(head[1])
    body = lines[1:]
    if len(body) != 1 << nx:
        raise ValueError(f"expected {1 << nx} rows, got {len(body)}")
    rows = []
    for ln in body:
        if len(ln) != 1 << ny or any(c not in "01" for c in ln):
            raise ValueError(f"bad row {ln!r}")
        r = 0
        for y, c in enumerate(ln):
            r |= (c == "1") << y
        rows.append(r)
    return TruthTable(nx, ny, tuple(rows))


def format_truth_table(tt: TruthTable) -> str:
    out = [f"{tt.nx} {tt.ny}"]
    for x in range(tt.n_rows):
        out.append("".join("1" if tt.entry(x, y) else "0" for y in range(tt.n_cols)))
    return "\n".join(out) + "\n"
