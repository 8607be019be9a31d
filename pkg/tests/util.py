"""Shared generators and independent oracles for the test suite.

Oracles here are deliberately implemented differently from the library
code (dense lists instead of bit-packing, brute-force enumeration
instead of closed forms) so agreement is meaningful.
"""

from __future__ import annotations

import random
from fractions import Fraction

from nlbox.protocols import (OrderedNlbProtocol, ParallelProtocol,
                             ParallelXorProtocol, TwoWayTree)
from nlbox.truthtable import TruthTable


def parity(v: int) -> int:
    return bin(v).count("1") & 1


def random_table(nx: int, ny: int, rng: random.Random) -> TruthTable:
    return TruthTable(nx, ny,
                      tuple(rng.randrange(1 << (1 << ny))
                            for _ in range(1 << nx)))


def random_tree(nx: int, ny: int, t: int, rng: random.Random) -> TwoWayTree:
    direction, bit = [], []
    for r in range(t):
        d = tuple(rng.randrange(2) for _ in range(1 << r))
        direction.append(d)
        bit.append(tuple(
            tuple(rng.randrange(2) for _ in range(1 << (nx if d[pre] else ny)))
            for pre in range(1 << r)))
    out_a = tuple(tuple(rng.randrange(2) for _ in range(1 << nx))
                  for _ in range(1 << t))
    out_b = tuple(tuple(rng.randrange(2) for _ in range(1 << ny))
                  for _ in range(1 << t))
    return TwoWayTree(nx, ny, t, tuple(direction), tuple(bit), out_a, out_b)


def random_ordered(nx: int, ny: int, t: int,
                   rng: random.Random) -> OrderedNlbProtocol:
    return OrderedNlbProtocol(
        nx, ny, t,
        tuple(tuple(tuple(rng.randrange(2) for _ in range(1 << i))
                    for _ in range(1 << nx)) for i in range(t)),
        tuple(tuple(tuple(rng.randrange(2) for _ in range(1 << i))
                    for _ in range(1 << ny)) for i in range(t)),
        tuple(tuple(rng.randrange(2) for _ in range(1 << t))
              for _ in range(1 << nx)),
        tuple(tuple(rng.randrange(2) for _ in range(1 << t))
              for _ in range(1 << ny)))


def xor_as_parallel(p: ParallelXorProtocol) -> ParallelProtocol:
    """Embed a parallel XOR protocol as a general parallel protocol."""
    xs, ys = 1 << p.nx, 1 << p.ny
    return ParallelProtocol(
        p.nx, p.ny, p.t, p.pbox, p.qbox,
        tuple(tuple(p.local_a[x] ^ parity(u) for u in range(1 << p.t))
              for x in range(xs)),
        tuple(tuple(p.local_b[y] ^ parity(u) for u in range(1 << p.t))
              for y in range(ys)))


def xor_as_ordered(p: ParallelXorProtocol) -> OrderedNlbProtocol:
    """Embed a parallel XOR protocol as an ordered protocol."""
    xs, ys = 1 << p.nx, 1 << p.ny
    step_a = tuple(tuple(tuple(p.pbox[i][x] for _ in range(1 << i))
                         for x in range(xs)) for i in range(p.t))
    step_b = tuple(tuple(tuple(p.qbox[i][y] for _ in range(1 << i))
                         for y in range(ys)) for i in range(p.t))
    out_a = tuple(tuple(p.local_a[x] ^ parity(u) for u in range(1 << p.t))
                  for x in range(xs))
    out_b = tuple(tuple(p.local_b[y] ^ parity(u) for u in range(1 << p.t))
                  for y in range(ys))
    return OrderedNlbProtocol(p.nx, p.ny, p.t, step_a, step_b, out_a, out_b)


def obfuscate(p: ParallelProtocol, rng: random.Random) -> ParallelProtocol:
    """Add a duplicated box and fold its outcome (plus another box's)
    into both output tables; the parity is unchanged but the protocol is
    no longer in XOR form."""
    if p.t == 0:
        return p
    k = rng.randrange(p.t)
    xs, ys = 1 << p.nx, 1 << p.ny
    mask_t = (1 << p.t) - 1
    out_a = tuple(tuple(p.out_a[x][u & mask_t] ^ ((u >> p.t) & 1) ^ ((u >> k) & 1)
                        for u in range(1 << (p.t + 1))) for x in range(xs))
    out_b = tuple(tuple(p.out_b[y][u & mask_t] ^ ((u >> p.t) & 1) ^ ((u >> k) & 1)
                        for u in range(1 << (p.t + 1))) for y in range(ys))
    return ParallelProtocol(p.nx, p.ny, p.t + 1, p.pbox + (p.pbox[k],),
                            p.qbox + (p.qbox[k],), out_a, out_b)


def oracle_parallel_dist(p: ParallelProtocol, x: int, y: int):
    """Joint output distribution by brute force over box outcome pairs.

    Enumerates each box's two legal (a_i, b_i) pairs directly, without
    the engine's one-sided-uniform shortcut.
    """
    dists: dict[tuple[int, int], Fraction] = {}
    w = Fraction(1, 1 << p.t)
    for avec in range(1 << p.t):
        bvec = 0
        for i in range(p.t):
            ai = (avec >> i) & 1
            bvec |= (ai ^ (p.pbox[i][x] & p.qbox[i][y])) << i
        key = (p.out_a[x][avec], p.out_b[y][bvec])
        dists[key] = dists.get(key, Fraction(0)) + w
    return dists


def oracle_rank(rows: list[list[int]]) -> int:
    """Dense-list Gaussian elimination, independent of the bit-packed one."""
    m = [row[:] for row in rows]
    rank = 0
    n_cols = len(m[0]) if m else 0
    for c in range(n_cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                m[r] = [a ^ b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank
