"""Constructive transformations between protocol models.

Synthesis from truth tables, communication-to-box compilers, box-count
reduction and XOR normalization, distributed circuit evaluation, and
the bridges between ordered box protocols, oblivious transfer, and
secure-AND protocols.  Every compiler is a pure function emitting a new
protocol object whose behavior can be checked with the exact engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import gf2
from .engine import ProtocolError, privacy_audit_and
from .protocols import (AndProtocol, GeneralNlbProtocol, OneWayProtocol,
                        OrderedNlbProtocol, OtProtocol, ParallelProtocol,
                        ParallelXorProtocol, TwoWayTree, validate)
from .truthtable import TruthTable

MAX_TREE_DEPTH = 8


@dataclass(frozen=True)
class CompilerReport:
    """Size accounting for one compiler invocation."""

    source_size: int  # bits of communication / gates / boxes consumed
    target_count: int  # boxes / OT calls / gates emitted
    certificate: str  # how behavior equality was (or can be) checked


def _parity(v: int) -> int:
    return bin(v).count("1") & 1


# --- synthesis from truth tables ---


def synth_rank(f: TruthTable) -> ParallelXorProtocol:
    """Strict XOR protocol with exactly rank(M_f) boxes.

    Box i's inputs are the factors of the rank-revealing decomposition,
    so the XOR of the box outcome parities reproduces f entrywise.
    """
    fac = gf2.gf2_factorize(f)
    pbox = tuple(tuple((p >> x) & 1 for x in range(f.n_rows))
                 for p in fac.row_factors)
    qbox = tuple(tuple((q >> y) & 1 for y in range(f.n_cols))
                 for q in fac.col_factors)
    zero_a = (0,) * f.n_rows
    zero_b = (0,) * f.n_cols
    return ParallelXorProtocol(f.nx, f.ny, fac.t, pbox, qbox, zero_a, zero_b)


def synth_vandam(f: TruthTable) -> ParallelXorProtocol:
    """One box per nonzero row: Alice selects her row, Bob inputs its value."""
    pbox, qbox = [], []
    for z in range(f.n_rows):
        if f.rows[z]:
            pbox.append(tuple(1 if x == z else 0 for x in range(f.n_rows)))
            qbox.append(tuple(f.entry(z, y) for y in range(f.n_cols)))
    zero_a = (0,) * f.n_rows
    zero_b = (0,) * f.n_cols
    return ParallelXorProtocol(f.nx, f.ny, len(pbox), tuple(pbox), tuple(qbox),
                               zero_a, zero_b)


# --- communication to boxes ---


def oneway_to_parallel(p: OneWayProtocol) -> ParallelXorProtocol:
    """Replace a t-bit one-way message by 2^t - 1 parallel boxes.

    One box per message m != 0: Alice inputs whether she would have sent
    m, Bob inputs how receiving m would change his answer relative to
    message 0.  Sources never sending 0 are relabeled first.
    """
    xs, ys = 1 << p.nx, 1 << p.ny
    msg, out_b = p.msg, p.out_b
    if 0 not in set(msg):
        shift = msg[0]
        msg = tuple(m ^ shift for m in msg)
        out_b = tuple(p.out_b[m ^ shift] for m in range(1 << p.t))
    pbox, qbox = [], []
    for m in range(1, 1 << p.t):
        pbox.append(tuple(1 if msg[x] == m else 0 for x in range(xs)))
        qbox.append(tuple(out_b[m][y] ^ out_b[0][y] for y in range(ys)))
    return ParallelXorProtocol(p.nx, p.ny, (1 << p.t) - 1, tuple(pbox),
                               tuple(qbox), tuple(p.out_a),
                               tuple(out_b[0]))


def twoway_to_parallel(p: TwoWayTree) -> ParallelXorProtocol:
    """Replace a depth-t two-way protocol tree by at most 2^t - 1 boxes.

    Downward recursion removing the last communicated bit at each step:
    the per-prefix output families are doubled, with the speaker's new
    entries carrying the communicated bit and the listener's carrying
    the difference between their two possible continuations.
    """
    if p.t > MAX_TREE_DEPTH:
        raise ProtocolError(f"tree depth {p.t} exceeds the {MAX_TREE_DEPTH} limit")
    errs = validate(p)
    if errs:
        raise ProtocolError("malformed tree: " + "; ".join(errs))
    xs, ys = 1 << p.nx, 1 << p.ny
    # fam_a[i][prefix][x], fam_b[i][prefix][y]; prefixes are k-bit transcripts
    fam_a = [[list(p.out_a[tr]) for tr in range(1 << p.t)]]
    fam_b = [[list(p.out_b[tr]) for tr in range(1 << p.t)]]
    for k in range(p.t, 0, -1):
        half = 1 << (k - 1)
        n_old = len(fam_a)
        new_a = [[[0] * xs for _ in range(half)] for _ in range(2 * n_old)]
        new_b = [[[0] * ys for _ in range(half)] for _ in range(2 * n_old)]
        for pre in range(half):
            d = p.direction[k - 1][pre]
            lo, hi = pre, pre | (1 << (k - 1))
            if d:  # Alice speaks: she absorbs the bit, Bob splits
                for x in range(xs):
                    c = p.bit[k - 1][pre][x]
                    tr = hi if c else lo
                    for i in range(n_old):
                        new_a[i][pre][x] = fam_a[i][tr][x]
                        if i == 0:
                            new_a[n_old][pre][x] = c
                        else:
                            new_a[i + n_old][pre][x] = fam_a[i][tr][x] & c
                for y in range(ys):
                    for i in range(n_old):
                        new_b[i][pre][y] = fam_b[i][lo][y]
                        new_b[i + n_old][pre][y] = fam_b[i][lo][y] ^ fam_b[i][hi][y]
            else:  # Bob speaks: roles swapped
                for y in range(ys):
                    c = p.bit[k - 1][pre][y]
                    tr = hi if c else lo
                    for i in range(n_old):
                        new_b[i][pre][y] = fam_b[i][tr][y]
                        if i == 0:
                            new_b[n_old][pre][y] = c
                        else:
                            new_b[i + n_old][pre][y] = fam_b[i][tr][y] & c
                for x in range(xs):
                    for i in range(n_old):
                        new_a[i][pre][x] = fam_a[i][lo][x]
                        new_a[i + n_old][pre][x] = fam_a[i][lo][x] ^ fam_a[i][hi][x]
        fam_a, fam_b = new_a, new_b
    local_a = tuple(fam_a[0][0])
    local_b = tuple(fam_b[0][0])
    pbox = tuple(tuple(fam_a[i][0]) for i in range(1, len(fam_a)))
    qbox = tuple(tuple(fam_b[i][0]) for i in range(1, len(fam_b)))
    return ParallelXorProtocol(p.nx, p.ny, len(pbox), pbox, qbox,
                               local_a, local_b)


# --- box-count reduction and XOR normalization ---


def parallel_exact_function(p: ParallelProtocol) -> TruthTable | None:
    """The function computed in parity when the parity is deterministic."""
    xs, ys = 1 << p.nx, 1 << p.ny
    rows = []
    for x in range(xs):
        r = 0
        for y in range(ys):
            shift = 0
            for i in range(p.t):
                shift |= (p.pbox[i][x] & p.qbox[i][y]) << i
            vals = {p.out_a[x][a] ^ p.out_b[y][a ^ shift]
                    for a in range(1 << p.t)}
            if len(vals) != 1:
                return None
            r |= vals.pop() << y
        rows.append(r)
    return TruthTable(p.nx, p.ny, tuple(rows))


def _product_vector(p: ParallelProtocol, i: int) -> int:
    """p_i(x) q_i(y) packed over entries (x, y) at bit x * |Y| + y."""
    ys = 1 << p.ny
    v = 0
    for x in range(1 << p.nx):
        if p.pbox[i][x]:
            for y in range(ys):
                if p.qbox[i][y]:
                    v |= 1 << (x * ys + y)
    return v


def _separable_basis(xs: int, ys: int) -> list[int]:
    basis = []
    for x in range(xs):
        basis.append(((1 << ys) - 1) << (x * ys))
    col = 0
    for x in range(xs):
        col |= 1 << (x * ys)
    for y in range(ys):
        basis.append(col << y)
    return basis


def _find_dependency(p: ParallelProtocol) -> tuple[int, int] | None:
    """Coefficients C (bitmask over boxes) and the separable remainder s
    with XOR_{C_i=1} p_i q_i = s, or None when the products are
    independent modulo separable functions."""
    xs, ys = 1 << p.nx, 1 << p.ny
    # eliminate: basis of (vector, coeff) pairs, separable ones coeff 0
    basis: list[tuple[int, int]] = []

    def reduce(v: int, c: int) -> tuple[int, int]:
        for bv, bc in basis:
            low = bv & -bv
            if v & low:
                v ^= bv
                c ^= bc
        return v, c

    def insert(v: int, c: int) -> None:
        # keep rows pivot-reduced so the lowest set bit identifies each
        for idx, (bv, bc) in enumerate(basis):
            if bv & (v & -v):
                basis[idx] = (bv ^ v, bc ^ c)
        basis.append((v, c))
        basis.sort(key=lambda e: e[0] & -e[0])

    for s in _separable_basis(xs, ys):
        v, c = reduce(s, 0)
        if v:
            insert(v, c)
    for i in range(p.t):
        v, c = reduce(_product_vector(p, i), 1 << i)
        if v == 0:
            coeff = c | (1 << i)
            rem = 0
            for j in range(p.t):
                if (coeff >> j) & 1:
                    rem ^= _product_vector(p, j)
            return coeff, rem
        insert(v, c | (1 << i))
    return None


def independence_reduce(p: ParallelProtocol) -> ParallelProtocol:
    """Drop boxes whose input products are separable-dependent on others.

    Whenever XOR of some box products equals alpha(x) XOR beta(y), one of
    those boxes is redundant: each player substitutes their locally
    computable expression for its outcome.  The computed parity is
    preserved for every branch; the reduced protocol's products are
    linearly independent modulo separable functions.
    """
    if parallel_exact_function(p) is None:
        raise ProtocolError("independence reduction requires a deterministic parity")
    while True:
        dep = _find_dependency(p)
        if dep is None:
            return p
        coeff, rem = dep
        k = coeff.bit_length() - 1  # highest box in the dependency
        ys = 1 << p.ny
        # split the separable remainder rem(x,y) = alpha(x) XOR beta(y)
        alpha = [(rem >> (x * ys)) & 1 for x in range(1 << p.nx)]
        beta = [((rem >> y) & 1) ^ alpha[0] for y in range(ys)]
        c_rest = coeff & ~(1 << k)

        def strip(vec: int, pos: int) -> int:
            return (vec & ((1 << pos) - 1)) | ((vec >> (pos + 1)) << pos)

        def unstrip(vec: int, pos: int, bit: int) -> int:
            return (vec & ((1 << pos) - 1)) | (bit << pos) | ((vec >> pos) << (pos + 1))

        new_out_a = []
        for x in range(1 << p.nx):
            row = []
            for av in range(1 << (p.t - 1)):
                ak = alpha[x] ^ _parity(unstrip(av, k, 0) & c_rest)
                row.append(p.out_a[x][unstrip(av, k, ak)])
            new_out_a.append(tuple(row))
        new_out_b = []
        for y in range(ys):
            row = []
            for bv in range(1 << (p.t - 1)):
                bk = beta[y] ^ _parity(unstrip(bv, k, 0) & c_rest)
                row.append(p.out_b[y][unstrip(bv, k, bk)])
            new_out_b.append(tuple(row))
        p = ParallelProtocol(
            p.nx, p.ny, p.t - 1,
            tuple(t for i, t in enumerate(p.pbox) if i != k),
            tuple(t for i, t in enumerate(p.qbox) if i != k),
            tuple(new_out_a), tuple(new_out_b))


def xor_normalize_parallel(p: ParallelProtocol) -> ParallelXorProtocol:
    """Turn an exact parallel protocol into a strict XOR one, +2 boxes max.

    After independence reduction, each output's algebraic normal form in
    its own box outcomes must be affine with matching linear parts on
    both sides; the affine constants are folded into two extra boxes
    paired with a constant-1 input on the other side.
    """
    f = parallel_exact_function(p)
    if f is None:
        raise ProtocolError("claims violated: protocol parity is not deterministic")
    p = independence_reduce(p)
    xs, ys = 1 << p.nx, 1 << p.ny
    lin = None
    const_a = []
    for x in range(xs):
        mono = gf2.anf(p.out_a[x])
        linear = 0
        for m in mono:
            if m and m & (m - 1):
                raise ProtocolError("claims violated: nonlinear output term")
            if m:
                linear |= m
        if lin is None:
            lin = linear
        elif lin != linear:
            raise ProtocolError("claims violated: output linear part varies")
        const_a.append(1 if 0 in mono else 0)
    const_b = []
    for y in range(ys):
        mono = gf2.anf(p.out_b[y])
        linear = 0
        for m in mono:
            if m and m & (m - 1):
                raise ProtocolError("claims violated: nonlinear output term")
            if m:
                linear |= m
        if lin != linear:
            raise ProtocolError("claims violated: the two linear parts differ")
        const_b.append(1 if 0 in mono else 0)
    pbox = [p.pbox[i] for i in range(p.t) if (lin >> i) & 1]
    qbox = [p.qbox[i] for i in range(p.t) if (lin >> i) & 1]
    if any(const_a):
        pbox.append(tuple(const_a))
        qbox.append((1,) * ys)
    if any(const_b):
        pbox.append((1,) * xs)
        qbox.append(tuple(const_b))
    return ParallelXorProtocol(p.nx, p.ny, len(pbox), tuple(pbox), tuple(qbox),
                               (0,) * xs, (0,) * ys)


def xor_normalize_general(p):
    """Append two boxes folding each side's output into a pure outcome XOR.

    Works for ordered and general-schedule protocols, exact or not; the
    output parity distribution is preserved branch-by-branch.
    """
    xs, ys = 1 << p.nx, 1 << p.ny
    t = p.t
    if isinstance(p, OrderedNlbProtocol):
        step_a = list(p.step_a)
        step_b = list(p.step_b)
        # box t: Alice folds her output, Bob inputs 1
        step_a.append(tuple(tuple(p.out_a[x][u] ^ _parity(u)
                                  for u in range(1 << t)) for x in range(xs)))
        step_b.append(tuple(((1,) * (1 << t)) for _ in range(ys)))
        # box t+1: Bob folds his output (ignoring his box-t outcome)
        step_a.append(tuple(((1,) * (1 << (t + 1))) for _ in range(xs)))
        step_b.append(tuple(tuple(p.out_b[y][u & ((1 << t) - 1)]
                                  ^ _parity(u & ((1 << t) - 1))
                                  for u in range(1 << (t + 1)))
                            for y in range(ys)))
        out_a = tuple(tuple(_parity(u) for u in range(1 << (t + 2)))
                      for _ in range(xs))
        out_b = tuple(tuple(_parity(u) for u in range(1 << (t + 2)))
                      for _ in range(ys))
        return OrderedNlbProtocol(p.nx, p.ny, t + 2, tuple(step_a),
                                  tuple(step_b), out_a, out_b)
    if isinstance(p, GeneralNlbProtocol):
        def label_vec(obs: int, sched) -> int:
            v = 0
            for pos in range(t):
                v |= ((obs >> pos) & 1) << sched[pos]
            return v

        step_a = list(p.step_a)
        step_b = list(p.step_b)
        step_a.append(tuple(tuple(p.out_a[x][label_vec(o, p.sched_a)] ^ _parity(o)
                                  for o in range(1 << t)) for x in range(xs)))
        step_a.append(tuple(((1,) * (1 << (t + 1))) for _ in range(xs)))
        step_b.append(tuple(((1,) * (1 << t)) for _ in range(ys)))
        step_b.append(tuple(tuple(p.out_b[y][label_vec(o & ((1 << t) - 1),
                                                       p.sched_b)]
                                  ^ _parity(o & ((1 << t) - 1))
                                  for o in range(1 << (t + 1)))
                            for y in range(ys)))
        out = tuple(tuple(_parity(u) for u in range(1 << (t + 2)))
                    for _ in range(max(xs, ys)))
        return GeneralNlbProtocol(p.nx, p.ny, t + 2,
                                  p.sched_a + (t, t + 1), tuple(step_a),
                                  p.sched_b + (t, t + 1), tuple(step_b),
                                  out[:xs], out[:ys])
    raise ProtocolError("XOR normalization applies to ordered or general protocols")


# --- distributed circuits ---


@dataclass(frozen=True)
class InputWire:
    """Distributed input bit: Alice's share is bit a_bit of x (0 when
    None), Bob's share is bit b_bit of y."""

    a_bit: int | None
    b_bit: int | None


@dataclass(frozen=True)
class DistributedCircuit:
    """Topologically ordered circuit over distributed bits.

    Gate k's output is wire ``len(inputs) + k``; gates are
    ("not", w), ("xor", w1, w2), ("and", w1, w2), ("or", w1, w2).
    """

    nx: int
    ny: int
    inputs: tuple[InputWire, ...]
    gates: tuple[tuple, ...]
    output: int

    def n_wires(self) -> int:
        return len(self.inputs) + len(self.gates)


def circuit_to_nlb(c: DistributedCircuit) -> OrderedNlbProtocol:
    """Evaluate the circuit in parity: XOR/NOT are free, AND/OR cost two
    boxes each (their cross terms), and boxes whose input product is
    identically zero are elided (leaf products cost one box)."""
    xs, ys = 1 << c.nx, 1 << c.ny
    Share = Callable[[int, int], int]  # (input, own outcome vector) -> bit
    a_sh: list[Share] = []
    b_sh: list[Share] = []
    for w in c.inputs:
        a_sh.append((lambda ab: lambda x, av: (x >> ab) & 1 if ab is not None else 0)(w.a_bit))
        b_sh.append((lambda bb: lambda y, bv: (y >> bb) & 1 if bb is not None else 0)(w.b_bit))
    boxes: list[tuple[Share, Share]] = []

    def add_box(pf: Share, qf: Share) -> Share | None:
        """Returns the outcome accessor, or None when the product is 0."""
        i = len(boxes)
        p_zero = all(pf(x, av) == 0 for x in range(xs) for av in range(1 << i))
        q_zero = all(qf(y, bv) == 0 for y in range(ys) for bv in range(1 << i))
        if p_zero or q_zero:
            return None
        boxes.append((pf, qf))
        return lambda _inp, vec, i=i: (vec >> i) & 1

    def xor_funcs(f, g):
        return lambda inp, vec: f(inp, vec) ^ g(inp, vec)

    for gate in c.gates:
        op = gate[0]
        if op == "not":
            (_, w) = gate
            a_sh.append((lambda f: lambda x, av: f(x, av) ^ 1)(a_sh[w]))
            b_sh.append(b_sh[w])
        elif op == "xor":
            _, w1, w2 = gate
            a_sh.append(xor_funcs(a_sh[w1], a_sh[w2]))
            b_sh.append(xor_funcs(b_sh[w1], b_sh[w2]))
        elif op in ("and", "or"):
            _, w1, w2 = gate
            a1, a2, b1, b2 = a_sh[w1], a_sh[w2], b_sh[w1], b_sh[w2]
            # u op v = (a1 op a2) XOR (b1 op b2) XOR a1 b2 XOR a2 b1 holds
            # for both AND and OR, so either gate costs the two cross boxes
            cross = [add_box(a1, b2), add_box(a2, b1)]
            if op == "and":
                loc_a = lambda x, av, a1=a1, a2=a2: a1(x, av) & a2(x, av)
                loc_b = lambda y, bv, b1=b1, b2=b2: b1(y, bv) & b2(y, bv)
            else:
                loc_a = lambda x, av, a1=a1, a2=a2: a1(x, av) | a2(x, av)
                loc_b = lambda y, bv, b1=b1, b2=b2: b1(y, bv) | b2(y, bv)
            fa, fb = loc_a, loc_b
            for acc in cross:
                if acc is not None:
                    fa = xor_funcs(fa, acc)
                    fb = xor_funcs(fb, acc)
            a_sh.append(fa)
            b_sh.append(fb)
        else:
            raise ProtocolError(f"unknown gate {op!r}")

    t = len(boxes)
    step_a = tuple(tuple(tuple(pf(x, pre) for pre in range(1 << i))
                         for x in range(xs))
                   for i, (pf, _qf) in enumerate(boxes))
    step_b = tuple(tuple(tuple(qf(y, pre) for pre in range(1 << i))
                         for y in range(ys))
                   for i, (_pf, qf) in enumerate(boxes))
    out_a = tuple(tuple(a_sh[c.output](x, av) for av in range(1 << t))
                  for x in range(xs))
    out_b = tuple(tuple(b_sh[c.output](y, bv) for bv in range(1 << t))
                  for y in range(ys))
    return OrderedNlbProtocol(c.nx, c.ny, t, step_a, step_b, out_a, out_b)


# --- oblivious transfer and secure AND ---


def ordered_to_ot(p) -> OtProtocol:
    """One OT per box: Alice masks her box input with a fresh private bit
    and the OT hands Bob exactly the outcome his box would have shown."""
    if not isinstance(p, OrderedNlbProtocol):
        raise ProtocolError("OT compilation requires an ordered protocol")
    xs, ys = 1 << p.nx, 1 << p.ny
    nr = 1 << p.t
    weights = (Fraction(1, nr),) * nr
    in_a = []
    for i in range(p.t):
        rows = []
        for x in range(xs):
            row = []
            for r in range(nr):
                ri = (r >> i) & 1
                pi = p.step_a[i][x][r & ((1 << i) - 1)]
                row.append((ri, ri ^ pi))
            rows.append(tuple(row))
        in_a.append(tuple(rows))
    in_b = tuple(tuple(tuple(p.step_b[i][y][pre] for pre in range(1 << i))
                       for y in range(ys)) for i in range(p.t))
    out_a = tuple(tuple(p.out_a[x][r] for r in range(nr)) for x in range(xs))
    out_b = tuple(tuple(p.out_b[y][rec] for rec in range(nr)) for y in range(ys))
    return OtProtocol(p.nx, p.ny, p.t, weights, tuple(in_a), in_b, out_a, out_b)


def and_from_oneway(p: OneWayProtocol) -> AndProtocol:
    """Secure-AND protocol with one gate per possible message.

    Alice raises the gate matching her message; Bob inputs his answer to
    that message, so exactly one gate output carries his contribution.
    """
    xs, ys = 1 << p.nx, 1 << p.ny
    n_gates = 1 << p.t
    pbox = tuple(tuple(1 if p.msg[x] == m else 0 for x in range(xs))
                 for m in range(n_gates))
    qbox = tuple(tuple(p.out_b[m][y] for y in range(ys)) for m in range(n_gates))
    out_a = tuple(tuple(p.out_a[x] ^ ((gv >> p.msg[x]) & 1)
                        for gv in range(1 << n_gates)) for x in range(xs))
    return AndProtocol(p.nx, p.ny, n_gates, pbox, qbox, out_a)


def oneway_from_and(p: AndProtocol, f: TruthTable) -> OneWayProtocol:
    """Extract a one-way protocol from a perfectly private secure-AND one.

    Per input x there are at most two possible gate-output vectors,
    split by the value of f; the first position where they differ is a
    message Bob can answer from his own gate input.  For constant rows
    the unseen vector is chosen as the seen one flipped at the first
    gate whose Bob input is constant (and raised by Alice when that
    constant is 1), which keeps the formula an XOR of one-sided terms.
    """
    bad = privacy_audit_and(p, f)
    if bad is not None:
        raise ProtocolError(f"not private: {bad}")
    xs, ys = 1 << p.nx, 1 << p.ny
    msg, out_a = [], []
    for x in range(xs):
        vec = [None, None]
        for y in range(ys):
            vec[f.entry(x, y)] = p.gate_vector(x, y)
        if vec[0] is None or vec[1] is None:
            c = 0 if vec[1] is None else 1
            m = next((i for i in range(p.t)
                      if len(set(p.qbox[i])) == 1
                      and (p.qbox[i][0] == 0 or p.pbox[i][x] == 1)), None)
            if m is None:
                raise ProtocolError(
                    "not private: no constant-answer gate for a constant row")
            vec[1 - c] = vec[c] ^ (1 << m)
        else:
            m = ((vec[0] ^ vec[1]) & -(vec[0] ^ vec[1])).bit_length() - 1
        msg.append(m)
        out_a.append((vec[0] >> m) & 1)
    bits = max(1, p.t - 1).bit_length() if p.t > 1 else 0
    out_b = tuple(tuple(p.qbox[m][y] if m < p.t else 0 for y in range(ys))
                  for m in range(1 << bits))
    return OneWayProtocol(p.nx, p.ny, bits, tuple(msg), tuple(out_a), out_b)


# --- one-way communication measure ---


def d_oneway(f: TruthTable, parity: bool = True) -> int:
    """One-way deterministic communication of f, optionally in parity
    (rows counted up to complementation)."""
    full = (1 << f.n_cols) - 1
    if parity:
        classes = {min(r, r ^ full) for r in f.rows}
    else:
        classes = set(f.rows)
    return max(0, (len(classes) - 1)).bit_length()


def oneway_optimal(f: TruthTable, parity: bool = True) -> OneWayProtocol:
    """A d_oneway-optimal one-way protocol computing f in parity."""
    full = (1 << f.n_cols) - 1
    reps: dict[int, int] = {}
    msg, out_a = [], []
    for x in range(f.n_rows):
        row = f.rows[x]
        key = min(row, row ^ full) if parity else row
        if key not in reps:
            reps[key] = len(reps)
        msg.append(reps[key])
        out_a.append(1 if parity and row != key else 0)
    t = max(0, (len(reps) - 1)).bit_length()
    rows_by_m = {m: key for key, m in reps.items()}
    out_b = tuple(tuple((rows_by_m.get(m, 0) >> y) & 1 for y in range(f.n_cols))
                  for m in range(1 << t))
    return OneWayProtocol(f.nx, f.ny, t, tuple(msg), tuple(out_a), out_b)
