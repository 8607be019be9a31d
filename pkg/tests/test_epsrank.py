"""Approximate GF(2) rank: exact LP feasibility with verified witnesses."""

import random
from fractions import Fraction

import pytest

from nlbox import gf2
from nlbox.correlations import CorrelationMatrix
from nlbox.epsrank import (DimensionLimitError, EpsRankQuery, EpsRankResult,
                           enumerate_ranks, eps_rank, verify_witness)
from nlbox.truthtable import TruthTable, and_table, xor_table
from util import random_table

RNG = random.Random(91)

HALF = Fraction(1, 2)


def _eps_rank(matrix, eps, tmax=4) -> EpsRankResult:
    return eps_rank(EpsRankQuery(matrix, Fraction(eps), tmax))


def test_zero_eps_equals_exact_rank_2x2():
    for code in range(16):
        f = TruthTable(1, 1, (code & 3, code >> 2))
        res = _eps_rank(f, 0)
        assert res.t == gf2.gf2_rank(f)
        assert verify_witness(f, Fraction(0), res.witness)


def test_zero_eps_equals_exact_rank_random_3x3():
    for _ in range(10):
        rows = [[RNG.randrange(2) for _ in range(3)] for _ in range(3)]
        m = CorrelationMatrix(tuple(tuple(Fraction(v) for v in r) for r in rows))
        packed = [sum(v << y for y, v in enumerate(r)) for r in rows]
        res = _eps_rank(m, 0)
        assert res.t == gf2.rank_rows(packed, 3)
        assert verify_witness(m, Fraction(0), res.witness)


def test_nonincreasing_in_eps_and_at_most_one_at_half():
    for _ in range(10):
        f = random_table(2, 2, RNG)
        prev = None
        for eps in (Fraction(0), Fraction(1, 8), Fraction(1, 4), HALF):
            res = _eps_rank(f, eps)
            assert res.t is not None
            if prev is not None:
                assert res.t <= prev
            assert verify_witness(f, eps, res.witness)
            prev = res.t
        assert prev <= 1  # the constant-1/2 mixture is eps=1/2 close to anything


def test_witness_is_convex_and_within_eps():
    f = and_table()
    res = _eps_rank(f, Fraction(1, 4))
    assert sum(w for w, _ in res.witness) == 1
    assert all(w > 0 for w, _ in res.witness)
    assert verify_witness(f, Fraction(1, 4), res.witness)
    # tightening eps must invalidate any strictly approximate witness
    if res.t < gf2.gf2_rank(f):
        assert not verify_witness(f, Fraction(0), res.witness)


def test_tmax_cutoff_reports_exceeded():
    res = eps_rank(EpsRankQuery(xor_table(), Fraction(0), 1))
    assert res.exceeded
    assert res.t is None
    assert res.witness == ()


def test_rejects_bad_eps_and_oversized_matrix():
    with pytest.raises(ValueError):
        EpsRankQuery(and_table(), Fraction(3, 4), 2)
    with pytest.raises(ValueError):
        EpsRankQuery(and_table(), Fraction(-1, 8), 2)
    big = TruthTable(3, 3, (0,) * 8)  # 64 entries
    with pytest.raises(DimensionLimitError):
        _eps_rank(big, 0)
    with pytest.raises(DimensionLimitError):
        enumerate_ranks(5, 4)


def test_enumerate_ranks_partition():
    groups = enumerate_ranks(2, 2)
    assert sum(len(g) for g in groups) == 16
    assert len(groups[0]) == 1  # only the zero matrix
    # rank-1 2x2 Boolean matrices: 9 (choose nonzero row/col supports)
    assert len(groups[1]) == 9
    assert len(groups[2]) == 6


def test_rational_target_between_levels():
    # constant 1/4 matrix: at eps 1/4 the zero matrix alone suffices
    m = CorrelationMatrix(((Fraction(1, 4), Fraction(1, 4)),
                           (Fraction(1, 4), Fraction(1, 4))))
    assert _eps_rank(m, Fraction(1, 4)).t == 0
    # at eps 1/8 no rank-0 mixture works but rank-1 mixtures do
    res = _eps_rank(m, Fraction(1, 8))
    assert res.t == 1
    assert verify_witness(m, Fraction(1, 8), res.witness)
