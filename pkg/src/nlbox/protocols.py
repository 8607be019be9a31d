"""Protocol representations for every resource model.

All tables are tuples indexed by integer-encoded inputs: Alice's input
x in [0, 2^nx), Bob's y in [0, 2^ny), box-outcome vectors packed
little-endian (bit i is box i).  Values are immutable after
construction; ``validate`` reports structural violations instead of
raising so that malformed protocols can be diagnosed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union


@dataclass(frozen=True)
class ParallelXorProtocol:
    """Parallel boxes, outputs = local term XOR all own box outcomes.

    The "strict" form (local terms identically zero) is the model whose
    optimal box count equals the GF(2) rank of the target matrix.
    """

    nx: int
    ny: int
    t: int
    pbox: tuple[tuple[int, ...], ...]  # t tables over X
    qbox: tuple[tuple[int, ...], ...]  # t tables over Y
    local_a: tuple[int, ...]
    local_b: tuple[int, ...]

    @property
    def strict(self) -> bool:
        return not any(self.local_a) and not any(self.local_b)


@dataclass(frozen=True)
class ParallelProtocol:
    """Parallel boxes with arbitrary output tables over (input, outcomes)."""

    nx: int
    ny: int
    t: int
    pbox: tuple[tuple[int, ...], ...]
    qbox: tuple[tuple[int, ...], ...]
    out_a: tuple[tuple[int, ...], ...]  # out_a[x][avec]
    out_b: tuple[tuple[int, ...], ...]  # out_b[y][bvec]


@dataclass(frozen=True)
class OrderedNlbProtocol:
    """Boxes used in label order; step i sees outcomes of boxes 0..i-1 only.

    ``step_a[i][x][prefix]`` is Alice's input to box i given her first i
    outcomes packed in ``prefix`` (so the table width 2^i enforces the
    ordering structurally).
    """

    nx: int
    ny: int
    t: int
    step_a: tuple[tuple[tuple[int, ...], ...], ...]
    step_b: tuple[tuple[tuple[int, ...], ...], ...]
    out_a: tuple[tuple[int, ...], ...]  # out_a[x][avec]
    out_b: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class GeneralNlbProtocol:
    """Each side uses the boxes in its own order.

    ``sched_a`` is the label order in which Alice touches the boxes;
    ``step_a[pos][x][obs]`` her input at position pos given the outcomes
    she has observed so far (packed in touch order).  Output tables are
    indexed by outcomes in label order.
    """

    nx: int
    ny: int
    t: int
    sched_a: tuple[int, ...]
    step_a: tuple[tuple[tuple[int, ...], ...], ...]
    sched_b: tuple[int, ...]
    step_b: tuple[tuple[tuple[int, ...], ...], ...]
    out_a: tuple[tuple[int, ...], ...]
    out_b: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class OneWayProtocol:
    """One t-bit message from Alice; parity of the two outputs is the value."""

    nx: int
    ny: int
    t: int
    msg: tuple[int, ...]  # msg[x] in [0, 2^t)
    out_a: tuple[int, ...]
    out_b: tuple[tuple[int, ...], ...]  # out_b[m][y]


@dataclass(frozen=True)
class TwoWayTree:
    """Depth-t deterministic two-way protocol tree.

    Transcripts are packed little-endian (round r bit at position r).
    ``direction[r][prefix]`` is 1 when Alice speaks, and
    ``bit[r][prefix]`` is then a table over X (over Y otherwise).
    """

    nx: int
    ny: int
    t: int
    direction: tuple[tuple[int, ...], ...]
    bit: tuple[tuple[tuple[int, ...], ...], ...]
    out_a: tuple[tuple[int, ...], ...]  # out_a[transcript][x]
    out_b: tuple[tuple[int, ...], ...]  # out_b[transcript][y]

    def transcript(self, x: int, y: int) -> int:
        tr = 0
        for r in range(self.t):
            if self.direction[r][tr]:
                c = self.bit[r][tr][x]
            else:
                c = self.bit[r][tr][y]
            tr |= c << r
        return tr

    def evaluate(self, x: int, y: int) -> tuple[int, int]:
        tr = self.transcript(x, y)
        return self.out_a[tr][x], self.out_b[tr][y]


@dataclass(frozen=True)
class AndProtocol:
    """Parallel secure-AND gates; only Alice receives gate outputs."""

    nx: int
    ny: int
    t: int
    pbox: tuple[tuple[int, ...], ...]
    qbox: tuple[tuple[int, ...], ...]
    out_a: tuple[tuple[int, ...], ...]  # out_a[x][gate-output vector]

    def gate_vector(self, x: int, y: int) -> int:
        v = 0
        for i in range(self.t):
            v |= (self.pbox[i][x] & self.qbox[i][y]) << i
        return v


@dataclass(frozen=True)
class OtProtocol:
    """Sequence of 2-1 oblivious transfers; only Bob receives outputs.

    Alice's private randomness ranges over ``len(r_weights)`` values.
    Call i: Alice supplies the pair ``in_a[i][x][r]``, Bob supplies the
    choice bit ``in_b[i][y][received]`` from the bits received so far.
    """

    nx: int
    ny: int
    t: int
    r_weights: tuple[Fraction, ...]
    in_a: tuple[tuple[tuple[tuple[int, int], ...], ...], ...]
    in_b: tuple[tuple[tuple[int, ...], ...], ...]
    out_a: tuple[tuple[int, ...], ...]  # out_a[x][r]
    out_b: tuple[tuple[int, ...], ...]  # out_b[y][received]


@dataclass(frozen=True)
class ProtocolMixture:
    """Shared randomness as a finite weighted set of deterministic protocols."""

    components: tuple[tuple[Fraction, "Protocol"], ...]

    @property
    def nx(self) -> int:
        return self.components[0][1].nx

    @property
    def ny(self) -> int:
        return self.components[0][1].ny

    @property
    def t(self) -> int:
        return self.components[0][1].t


Protocol = Union[ParallelXorProtocol, ParallelProtocol, OrderedNlbProtocol,
                 GeneralNlbProtocol, OneWayProtocol, TwoWayTree, AndProtocol,
                 OtProtocol, ProtocolMixture]

NLB_KINDS = (ParallelXorProtocol, ParallelProtocol, OrderedNlbProtocol,
             GeneralNlbProtocol)


def _check_bits(vals, n, what, out):
    if len(vals) != n:
        out.append(f"{what}: expected {n} entries, found {len(vals)}")
        return
    if any(v not in (0, 1) for v in vals):
        out.append(f"{what}: non-bit entry")


def validate(p) -> list[str]:
    """Structural audit: totality, schedule legality, OT synchronization.

    Returns a list of human-readable violations; empty means ok.
    """
    out: list[str] = []
    if isinstance(p, ProtocolMixture):
        if not p.components:
            return ["mixture: no components"]
        total = sum((w for w, _ in p.components), Fraction(0))
        if total != 1:
            out.append(f"mixture: weights sum to {total}, not 1")
        if any(w <= 0 for w, _ in p.components):
            out.append("mixture: nonpositive weight")
        kinds = {type(c) for _, c in p.components}
        if len(kinds) > 1:
            out.append("mixture: components of mixed kinds")
        if len({(c.nx, c.ny, c.t) for _, c in p.components}) > 1:
            out.append("mixture: components disagree on dimensions or box count")
        for _, c in p.components:
            out.extend(validate(c))
        return out

    xs, ys = 1 << p.nx, 1 << p.ny
    if isinstance(p, (ParallelXorProtocol, ParallelProtocol, AndProtocol)):
        if len(p.pbox) != p.t or len(p.qbox) != p.t:
            out.append("box input table count differs from t")
        for i, tab in enumerate(p.pbox):
            _check_bits(tab, xs, f"pbox {i}", out)
        for i, tab in enumerate(p.qbox):
            _check_bits(tab, ys, f"qbox {i}", out)
    if isinstance(p, ParallelXorProtocol):
        _check_bits(p.local_a, xs, "localA", out)
        _check_bits(p.local_b, ys, "localB", out)
    if isinstance(p, (ParallelProtocol, OrderedNlbProtocol, GeneralNlbProtocol)):
        if len(p.out_a) != xs or len(p.out_b) != ys:
            out.append("output table missing rows")
        else:
            for x in range(xs):
                _check_bits(p.out_a[x], 1 << p.t, f"outA row {x}", out)
            for y in range(ys):
                _check_bits(p.out_b[y], 1 << p.t, f"outB row {y}", out)
    if isinstance(p, AndProtocol):
        if len(p.out_a) != xs:
            out.append("outA missing rows")
        else:
            for x in range(xs):
                _check_bits(p.out_a[x], 1 << p.t, f"outA row {x}", out)
    if isinstance(p, (OrderedNlbProtocol, GeneralNlbProtocol)):
        for side, steps, dom in (("A", p.step_a, xs), ("B", p.step_b, ys)):
            if len(steps) != p.t:
                out.append(f"step{side}: expected {p.t} steps")
                continue
            for i, tab in enumerate(steps):
                if len(tab) != dom:
                    out.append(f"step{side} {i}: missing input rows")
                    continue
                for row in tab:
                    if len(row) > 1 << i:
                        out.append(f"step{side} {i}: reads future box outcomes")
                        break
                    if len(row) < 1 << i:
                        out.append(f"step{side} {i}: table not total over prior outcomes")
                        break
                    if any(v not in (0, 1) for v in row):
                        out.append(f"step{side} {i}: non-bit entry")
                        break
    if isinstance(p, GeneralNlbProtocol):
        for side, sched in (("A", p.sched_a), ("B", p.sched_b)):
            if sorted(sched) != list(range(p.t)):
                out.append(f"sched{side}: not a permutation of box labels")
    if isinstance(p, OneWayProtocol):
        if len(p.msg) != xs:
            out.append("msg table not total")
        elif any(not 0 <= m < 1 << p.t for m in p.msg):
            out.append("msg value outside the t-bit message space")
        _check_bits(p.out_a, xs, "outA", out)
        if len(p.out_b) != 1 << p.t:
            out.append("outB missing message rows")
        else:
            for m in range(1 << p.t):
                _check_bits(p.out_b[m], ys, f"outB msg {m}", out)
    if isinstance(p, TwoWayTree):
        for r in range(p.t):
            if len(p.direction[r]) != 1 << r or len(p.bit[r]) != 1 << r:
                out.append(f"round {r}: tables not total over prefixes")
                continue
            for pre in range(1 << r):
                dom = xs if p.direction[r][pre] else ys
                _check_bits(p.bit[r][pre], dom, f"round {r} prefix {pre}", out)
        if len(p.out_a) != 1 << p.t or len(p.out_b) != 1 << p.t:
            out.append("leaf output tables not total")
    if isinstance(p, OtProtocol):
        nr = len(p.r_weights)
        if nr == 0:
            out.append("empty private-randomness domain")
        elif sum(p.r_weights, Fraction(0)) != 1:
            out.append("private-randomness weights do not sum to 1")
        if any(w <= 0 for w in p.r_weights):
            out.append("nonpositive private-randomness weight")
        if len(p.in_a) != p.t or len(p.in_b) != p.t:
            out.append("OT call tables differ from t")
        else:
            for i in range(p.t):
                if len(p.in_a[i]) != xs or any(len(row) != nr for row in p.in_a[i]):
                    out.append(f"OT call {i}: Alice table not total")
                if len(p.in_b[i]) != ys:
                    out.append(f"OT call {i}: Bob table not total")
                    continue
                for row in p.in_b[i]:
                    if len(row) > 1 << i:
                        out.append(f"OT call {i}: choice reads future transfers")
                        break
                    if len(row) < 1 << i:
                        out.append(f"OT call {i}: choice table not total")
                        break
        if len(p.out_a) != xs or any(len(row) != nr for row in p.out_a):
            out.append("outA not total over (x, randomness)")
        if len(p.out_b) != ys or any(len(row) != 1 << p.t for row in p.out_b):
            out.append("outB not total over (y, received bits)")
    return out
