"""Exact phase-1 simplex over rationals.

Small dense tableau with Bland's rule, used as the feasibility core of
the approximate-rank oracle.  Instance sizes there are tiny (tens of
rows), so exact ``Fraction`` arithmetic is affordable and lets callers
assert equalities instead of tolerances.
"""

from __future__ import annotations

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def solve_phase1(columns, b):
    """Minimize the sum of artificials for ``A x + I art = b``, ``x >= 0``.

    Args:
        columns: list of structural columns, each a list of m Fractions.
        b: right-hand side, m nonnegative Fractions.

    Returns:
        (opt, x, y): the phase-1 optimum, structural values at the
        optimum (length ``len(columns)``), and the simplex multipliers
        (length m).  ``opt == 0`` iff the system is feasible.
    """
    m = len(b)
    n = len(columns)
    if any(v < 0 for v in b):
        raise ValueError("phase-1 requires nonnegative rhs")
    # tableau rows: structural columns, artificial identity, rhs
    tab = [[columns[j][i] for j in range(n)] + [ONE if k == i else ZERO for k in range(m)]
           + [b[i]] for i in range(m)]
    ncols = n + m
    basis = [n + i for i in range(m)]
    # reduced-cost row for cost = sum of artificials
    obj = [ZERO] * (ncols + 1)
    for j in range(ncols):
        s = ZERO
        for i in range(m):
            s += tab[i][j]
        obj[j] = (ONE if j >= n else ZERO) - s
    obj[ncols] = -sum(b, ZERO)

    while True:
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            break
        # Bland ratio test: smallest ratio, ties by smallest basis index
        leave, best = None, None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][ncols] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            raise ArithmeticError("phase-1 objective unbounded below")
        piv = tab[leave][enter]
        row = tab[leave]
        if piv != 1:
            tab[leave] = row = [v / piv for v in row]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [v - f * w for v, w in zip(tab[i], row)]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [v - f * w for v, w in zip(obj, row)]
        basis[leave] = enter

    opt = -obj[ncols]
    x = [ZERO] * n
    for i, bi in enumerate(basis):
        if bi < n:
            x[bi] = tab[i][ncols]
    # duals: reduced cost of artificial i is 1 - y_i
    y = [ONE - obj[n + i] for i in range(m)]
    return opt, x, y
