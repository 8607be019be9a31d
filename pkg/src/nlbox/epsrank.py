"""Approximate rank over GF(2) via exact rational feasibility LPs.

The epsilon-rank of a [0,1]-valued matrix is the least t such that a
convex mixture of Boolean matrices of GF(2) rank at most t lies within
epsilon of it entrywise.  Candidate Boolean matrices are enumerated
exhaustively (desk scale: at most 16 entries) and grouped by rank; the
mixture search is a phase-1 simplex over rationals, accelerated by
column generation so the master LP stays tiny even with 65k candidates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import gf2
from ._simplex import solve_phase1
from .truthtable import TruthTable

MAX_ENTRIES = 16

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionLimitError(ValueError):
    """Matrix too large for exhaustive Boolean-matrix enumeration."""


@lru_cache(maxsize=None)
def enumerate_ranks(n_rows: int, n_cols: int) -> tuple[np.ndarray, ...]:
    """Masks of all Boolean n_rows x n_cols matrices, grouped by GF(2) rank.

    Element r of the returned tuple holds the row-major packed masks of
    the matrices with rank exactly r.
    """
    n_entries = n_rows * n_cols
    if n_entries > MAX_ENTRIES:
        raise DimensionLimitError(
            f"{n_rows}x{n_cols} exceeds the {MAX_ENTRIES}-entry enumeration limit")
    masks = np.arange(1 << n_entries, dtype=np.int64)
    ranks = gf2.rank_batch_masks(masks, n_rows, n_cols)
    rmax = min(n_rows, n_cols)
    return tuple(masks[ranks == r] for r in range(rmax + 1))


def mask_entries(mask: int, n_rows: int, n_cols: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple((mask >> (x * n_cols + y)) & 1 for y in range(n_cols))
                 for x in range(n_rows))


@dataclass(frozen=True)
class EpsRankQuery:
    matrix: object  # TruthTable or anything exposing rational entries
    eps: Fraction
    tmax: int

    def __post_init__(self):
        if not (ZERO <= self.eps <= Fraction(1, 2)):
            raise ValueError("eps must lie in [0, 1/2]")
        if self.tmax < 0:
            raise ValueError("tmax must be nonnegative")


@dataclass(frozen=True)
class EpsRankResult:
    t: int | None  # None when no t <= tmax is feasible
    witness: tuple[tuple[Fraction, tuple[tuple[int, ...], ...]], ...]

    @property
    def exceeded(self) -> bool:
        return self.t is None


def _target_entries(matrix) -> tuple[int, int, list[Fraction]]:
    """Flatten the target into rational entries in row-major order."""
    if isinstance(matrix, TruthTable):
        r, c = matrix.n_rows, matrix.n_cols
        flat = [Fraction(matrix.entry(x, y)) for x in range(r) for y in range(c)]
        return r, c, flat
    entries = matrix.entries  # CorrelationMatrix duck-typing
    r, c = len(entries), len(entries[0])
    flat = [Fraction(v) for row in entries for v in row]
    return r, c, flat


def _mixture_feasible(masks: np.ndarray, lo, hi, n_entries: int, n_cols: int):
    """Search for a convex mixture of the masked matrices whose entrywise
    expectation lies in [lo, hi]; returns (mask, weight) pairs or None.

    Column generation over an exact phase-1 master: candidates are priced
    with the exact duals, so both feasibility and infeasibility verdicts
    are rational-arithmetic exact.
    """
    # Row layout: one <=hi row per entry, one >=lo row per entry with lo>0,
    # and the convexity row.
    lo_rows = [e for e in range(n_entries) if lo[e] > 0]
    m = n_entries + len(lo_rows) + 1
    b = [hi[e] for e in range(n_entries)] + [lo[e] for e in lo_rows] + [ONE]

    def candidate_column(mask: int) -> list[Fraction]:
        bits = [(int(mask) >> e) & 1 for e in range(n_entries)]
        col = [Fraction(bits[e]) for e in range(n_entries)]
        col += [Fraction(bits[e]) for e in lo_rows]
        col.append(ONE)
        return col

    # permanent slack/surplus columns
    fixed_cols = []
    for e in range(n_entries):
        col = [ZERO] * m
        col[e] = ONE
        fixed_cols.append(col)
    for i, _e in enumerate(lo_rows):
        col = [ZERO] * m
        col[n_entries + i] = -ONE
        fixed_cols.append(col)

    # float pricing matrix: value of each candidate column under duals
    bits_f = ((np.asarray(masks, dtype=np.int64)[:, None]
               >> np.arange(n_entries, dtype=np.int64)) & 1).astype(np.float64)

    active: list[int] = []
    active_set: set[int] = set()
    for _round in range(len(masks) + 1):
        cols = [candidate_column(masks[j]) for j in active] + fixed_cols
        opt, x, y = solve_phase1(cols, b)
        if opt == 0:
            mix = [(int(masks[j]), x[i]) for i, j in enumerate(active) if x[i] > 0]
            return mix
        # price all candidates: reduced cost = -(y . column)
        y_f = np.array([float(v) for v in y])
        scores = bits_f @ y_f[:n_entries]
        if lo_rows:
            scores += bits_f[:, lo_rows] @ y_f[n_entries:n_entries + len(lo_rows)]
        scores += y_f[-1]
        order = np.argsort(-scores)
        added = 0
        for j in order[:64]:
            j = int(j)
            if j in active_set:
                continue
            # exact reduced-cost check before admitting the column
            colv = candidate_column(masks[j])
            rc = -sum(yi * ci for yi, ci in zip(y, colv))
            if rc < 0:
                active.append(j)
                active_set.add(j)
                added += 1
                if added >= 8:
                    break
        if added == 0:
            return None
    raise RuntimeError("column generation failed to terminate")


def eps_rank(q: EpsRankQuery) -> EpsRankResult:
    """Smallest t <= tmax admitting an eps-close mixture, with a witness."""
    n_rows, n_cols, target = _target_entries(q.matrix)
    n_entries = n_rows * n_cols
    if n_entries > MAX_ENTRIES:
        raise DimensionLimitError(
            f"{n_rows}x{n_cols} exceeds the {MAX_ENTRIES}-entry enumeration limit")
    lo = [max(ZERO, v - q.eps) for v in target]
    hi = [min(ONE, v + q.eps) for v in target]
    by_rank = enumerate_ranks(n_rows, n_cols)
    rmax = len(by_rank) - 1
    for t in range(min(q.tmax, rmax) + 1):
        masks = np.concatenate([by_rank[r] for r in range(t + 1)])
        mix = _mixture_feasible(masks, lo, hi, n_entries, n_cols)
        if mix is not None:
            witness = tuple((w, mask_entries(mask, n_rows, n_cols)) for mask, w in mix)
            return EpsRankResult(t, witness)
    if q.tmax >= rmax:
        # every matrix is within eps=... of a full-rank mixture containing itself
        raise AssertionError("full-rank search cannot fail for eps >= 0")
    return EpsRankResult(None, ())


def verify_witness(matrix, eps: Fraction,
                   witness: tuple[tuple[Fraction, tuple[tuple[int, ...], ...]], ...]) -> bool:
    """Exact check that the mixture is convex and within eps in max-norm."""
    n_rows, n_cols, target = _target_entries(matrix)
    if sum((w for w, _ in witness), ZERO) != 1:
        return False
    if any(w <= 0 for w, _ in witness):
        return False
    for x in range(n_rows):
        for y in range(n_cols):
            v = sum((w * g[x][y] for w, g in witness), ZERO)
            if abs(v - target[x * n_cols + y]) > eps:
                return False
    return True
