"""Exact and sampled execution of protocols, plus auditors.

The exact engine enumerates shared randomness, Alice-private
randomness, and box-outcome branches with rational probabilities, so
every distributional claim can be asserted as an equality.  Monte Carlo
sampling is the only floating-point surface and derives per-trial seeds
from a cryptographic hash of (master seed, trial index).

Box semantics: each box outcome pair satisfies a XOR b = p AND q with
the first-touched side's outcome a fresh unbiased bit.  Enumerating
Alice's outcomes as free uniform bits and forcing Bob's realizes the
same joint law for every interleaving of the two schedules, because the
XOR constraint is symmetric; the Bob-first sweep is kept as an
independent route for the invariance test.
"""

from __future__ import annotations

import hashlib
import os
import random
from dataclasses import dataclass
from fractions import Fraction

from .protocols import (AndProtocol, GeneralNlbProtocol, OneWayProtocol,
                        OrderedNlbProtocol, OtProtocol, ParallelProtocol,
                        ParallelXorProtocol, ProtocolMixture, Protocol,
                        TwoWayTree, validate)
from .truthtable import TruthTable

DEFAULT_LIMIT_T = 20


class ResourceLimitError(RuntimeError):
    pass


class ProtocolError(ValueError):
    pass


def _limit_t() -> int:
    return int(os.environ.get("NLBOX_LIMIT_T", DEFAULT_LIMIT_T))


def _check_limit(t: int) -> None:
    if t > _limit_t():
        raise ResourceLimitError(
            f"2^{t} branch enumeration exceeds the t<={_limit_t()} limit")


@dataclass(frozen=True)
class OutcomeDistribution:
    """Exact joint distribution of the two players' output bits."""

    probs: dict[tuple[int, int], Fraction]

    def __post_init__(self):
        total = sum(self.probs.values(), Fraction(0))
        if total != 1 or any(p < 0 for p in self.probs.values()):
            raise ValueError("probabilities must be nonnegative and sum to 1")

    def parity_prob(self, bit: int) -> Fraction:
        return sum((p for (a, b), p in self.probs.items() if (a ^ b) == bit),
                   Fraction(0))

    def marginal_a(self) -> dict[int, Fraction]:
        out = {0: Fraction(0), 1: Fraction(0)}
        for (a, _b), p in self.probs.items():
            out[a] += p
        return out

    def marginal_b(self) -> dict[int, Fraction]:
        out = {0: Fraction(0), 1: Fraction(0)}
        for (_a, b), p in self.probs.items():
            out[b] += p
        return out


def _dist(pairs) -> OutcomeDistribution:
    probs: dict[tuple[int, int], Fraction] = {}
    for (a, b), p in pairs:
        if p:
            probs[(a, b)] = probs.get((a, b), Fraction(0)) + p
    return OutcomeDistribution(probs)


def _xor_shift(p: ParallelXorProtocol | ParallelProtocol | AndProtocol,
               x: int, y: int) -> int:
    s = 0
    for i in range(p.t):
        s |= (p.pbox[i][x] & p.qbox[i][y]) << i
    return s


def _parity(v: int) -> int:
    return bin(v).count("1") & 1


def exec_exact(p: Protocol, x: int, y: int) -> OutcomeDistribution:
    """Exact joint output distribution of the protocol on inputs (x, y)."""
    if isinstance(p, ProtocolMixture):
        acc: dict[tuple[int, int], Fraction] = {}
        for w, comp in p.components:
            for ab, q in exec_exact(comp, x, y).probs.items():
                acc[ab] = acc.get(ab, Fraction(0)) + w * q
        return OutcomeDistribution(acc)
    if isinstance(p, ParallelXorProtocol):
        d = _parity(_xor_shift(p, x, y))
        la, lb = p.local_a[x], p.local_b[y]
        if p.t == 0:
            return _dist([((la, lb), Fraction(1))])
        half = Fraction(1, 2)
        return _dist([((la, lb ^ d), half), ((la ^ 1, lb ^ d ^ 1), half)])
    if isinstance(p, ParallelProtocol):
        _check_limit(p.t)
        shift = _xor_shift(p, x, y)
        w = Fraction(1, 1 << p.t)
        return _dist(((p.out_a[x][a], p.out_b[y][a ^ shift]), w)
                     for a in range(1 << p.t))
    if isinstance(p, OrderedNlbProtocol):
        _check_limit(p.t)
        w = Fraction(1, 1 << p.t)
        return _dist((_run_ordered(p, x, y, u), w) for u in range(1 << p.t))
    if isinstance(p, GeneralNlbProtocol):
        _check_limit(p.t)
        w = Fraction(1, 1 << p.t)
        return _dist((_run_general(p, x, y, u)[:2], w) for u in range(1 << p.t))
    if isinstance(p, OneWayProtocol):
        return _dist([((p.out_a[x], p.out_b[p.msg[x]][y]), Fraction(1))])
    if isinstance(p, TwoWayTree):
        return _dist([(p.evaluate(x, y), Fraction(1))])
    if isinstance(p, AndProtocol):
        return _dist([((p.out_a[x][p.gate_vector(x, y)], 0), Fraction(1))])
    if isinstance(p, OtProtocol):
        return _dist(((_run_ot(p, x, y, r), w)
                      for r, w in enumerate(p.r_weights)))
    raise ProtocolError(f"cannot execute {type(p).__name__}")


def _run_ordered(p: OrderedNlbProtocol, x: int, y: int, u: int,
                 bob_first: bool = False) -> tuple[int, int]:
    """Run one branch with Alice's outcomes fixed to u (or Bob's if
    bob_first), the other side's forced by the box constraint."""
    if not bob_first:
        avec, bvec = u, 0
        for i in range(p.t):
            pi = p.step_a[i][x][avec & ((1 << i) - 1)]
            qi = p.step_b[i][y][bvec & ((1 << i) - 1)]
            bvec |= (((u >> i) & 1) ^ (pi & qi)) << i
    else:
        bvec, avec = u, 0
        for i in range(p.t):
            qi = p.step_b[i][y][bvec & ((1 << i) - 1)]
            pi = p.step_a[i][x][avec & ((1 << i) - 1)]
            avec |= (((u >> i) & 1) ^ (pi & qi)) << i
    return p.out_a[x][avec], p.out_b[y][bvec]


def exec_exact_ordered_sweep(p: OrderedNlbProtocol, x: int, y: int,
                             bob_first: bool) -> OutcomeDistribution:
    """Ordered execution with the free uniform bit on either side; the two
    sweeps must agree exactly (evaluation-order invariance)."""
    _check_limit(p.t)
    w = Fraction(1, 1 << p.t)
    return _dist((_run_ordered(p, x, y, u, bob_first), w)
                 for u in range(1 << p.t))


def _run_general(p: GeneralNlbProtocol, x: int, y: int, u: int):
    """One branch of a general-schedule protocol; u packs, in label order,
    the free uniform bit of each box (assigned to Alice's side)."""
    pin = [0] * p.t
    obs = 0
    for pos, label in enumerate(p.sched_a):
        pin[label] = p.step_a[pos][x][obs]
        obs |= ((u >> label) & 1) << pos
    bvec = 0
    obs_b = 0
    qin = [0] * p.t
    for pos, label in enumerate(p.sched_b):
        q = p.step_b[pos][y][obs_b]
        qin[label] = q
        bl = ((u >> label) & 1) ^ (pin[label] & q)
        obs_b |= bl << pos
        bvec |= bl << label
    return p.out_a[x][u], p.out_b[y][bvec], (u, bvec, tuple(pin), tuple(qin))


def _run_ot(p: OtProtocol, x: int, y: int, r: int,
            with_view: bool = False):
    received = 0
    calls = []
    for i in range(p.t):
        s0, s1 = p.in_a[i][x][r]
        c = p.in_b[i][y][received & ((1 << i) - 1)]
        o = s1 if c else s0
        calls.append((i, (s0, s1), c, o))
        received |= o << i
    a, b = p.out_a[x][r], p.out_b[y][received]
    if with_view:
        return a, b, received, calls
    return a, b


def ot_received_distribution(p: OtProtocol, x: int, y: int) -> dict[int, Fraction]:
    """Exact distribution of Bob's received OT bits over Alice's coins."""
    out: dict[int, Fraction] = {}
    for r, w in enumerate(p.r_weights):
        _a, _b, received, _ = _run_ot(p, x, y, r, with_view=True)
        out[received] = out.get(received, Fraction(0)) + w
    return out


# --- sampling ---


def derive_seed(master: int, index: int) -> int:
    h = hashlib.blake2b(f"{master}:{index}".encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big")


def exec_sample(p: Protocol, x: int, y: int, seed: int):
    """One run, deterministic given the seed; returns (a, b, transcript)."""
    rng = random.Random(derive_seed(seed, 0))
    return _sample(p, x, y, rng)


def _sample(p: Protocol, x: int, y: int, rng: random.Random):
    transcript: list[dict] = []
    if isinstance(p, ProtocolMixture):
        roll = rng.random()
        acc = 0.0
        comp = p.components[-1][1]
        for i, (w, c) in enumerate(p.components):
            acc += float(w)
            if roll < acc:
                comp = c
                transcript.append({"kind": "shared-randomness", "component": i})
                break
        a, b, sub = _sample(comp, x, y, rng)
        return a, b, transcript + sub
    if isinstance(p, (ParallelXorProtocol, ParallelProtocol)):
        avec = rng.getrandbits(p.t) if p.t else 0
        shift = _xor_shift(p, x, y)
        bvec = avec ^ shift
        for i in range(p.t):
            transcript.append({"kind": "box", "index": i,
                               "in": (p.pbox[i][x], p.qbox[i][y]),
                               "out": ((avec >> i) & 1, (bvec >> i) & 1)})
        if isinstance(p, ParallelXorProtocol):
            a = p.local_a[x] ^ _parity(avec)
            b = p.local_b[y] ^ _parity(bvec)
        else:
            a, b = p.out_a[x][avec], p.out_b[y][bvec]
        return a, b, transcript
    if isinstance(p, OrderedNlbProtocol):
        avec = bvec = 0
        for i in range(p.t):
            pi = p.step_a[i][x][avec]
            qi = p.step_b[i][y][bvec]
            ai = rng.getrandbits(1)
            bi = ai ^ (pi & qi)
            transcript.append({"kind": "box", "index": i, "in": (pi, qi),
                               "out": (ai, bi)})
            avec |= ai << i
            bvec |= bi << i
        return p.out_a[x][avec], p.out_b[y][bvec], transcript
    if isinstance(p, GeneralNlbProtocol):
        u = rng.getrandbits(p.t) if p.t else 0
        a, b, (avec, bvec, pin, qin) = _run_general(p, x, y, u)
        for label in range(p.t):
            transcript.append({"kind": "box", "index": label,
                               "in": (pin[label], qin[label]),
                               "out": ((avec >> label) & 1, (bvec >> label) & 1)})
        return a, b, transcript
    if isinstance(p, (OneWayProtocol, TwoWayTree, AndProtocol)):
        dist = exec_exact(p, x, y)
        (a, b), _w = next(iter(dist.probs.items()))
        if isinstance(p, OneWayProtocol):
            transcript.append({"kind": "message", "from": "A", "value": p.msg[x]})
        if isinstance(p, AndProtocol):
            v = p.gate_vector(x, y)
            for i in range(p.t):
                transcript.append({"kind": "and", "index": i,
                                   "in": (p.pbox[i][x], p.qbox[i][y]),
                                   "out": (v >> i) & 1})
        return a, b, transcript
    if isinstance(p, OtProtocol):
        roll = rng.random()
        acc = 0.0
        r = len(p.r_weights) - 1
        for i, w in enumerate(p.r_weights):
            acc += float(w)
            if roll < acc:
                r = i
                break
        a, b, _received, calls = _run_ot(p, x, y, r, with_view=True)
        for i, pair, c, o in calls:
            transcript.append({"kind": "ot", "index": i, "in": (pair, c), "out": o})
        return a, b, transcript
    raise ProtocolError(f"cannot sample {type(p).__name__}")


# --- error profile ---


@dataclass(frozen=True)
class ErrorProfile:
    table: dict[tuple[int, int], Fraction]
    worst: Fraction

    @property
    def exact(self) -> bool:
        return self.worst == 0


def _parity_error(p: Protocol, f: TruthTable, x: int, y: int) -> Fraction:
    if isinstance(p, ProtocolMixture):
        return sum((w * _parity_error(c, f, x, y) for w, c in p.components),
                   Fraction(0))
    if isinstance(p, ParallelXorProtocol):
        # parity is deterministic: locals XOR the box products
        par = p.local_a[x] ^ p.local_b[y] ^ _parity(_xor_shift(p, x, y))
        return Fraction(0) if par == f.entry(x, y) else Fraction(1)
    return exec_exact(p, x, y).parity_prob(f.entry(x, y) ^ 1)


def error_profile(p: Protocol, f: TruthTable) -> ErrorProfile:
    """Exact probability of output parity differing from f, per input."""
    table = {}
    worst = Fraction(0)
    for x in range(f.n_rows):
        for y in range(f.n_cols):
            e = _parity_error(p, f, x, y)
            table[(x, y)] = e
            worst = max(worst, e)
    return ErrorProfile(table, worst)


# --- audits ---


@dataclass(frozen=True)
class AuditViolation:
    check: str
    detail: str
    witness: tuple

    def __str__(self):
        return f"{self.check}: {self.detail} (witness {self.witness})"


def _alice_view(p, x: int, y: int) -> dict[tuple, Fraction]:
    """Distribution of (Alice box outcomes, Alice output) on (x, y)."""
    out: dict[tuple, Fraction] = {}

    def add(key, w):
        out[key] = out.get(key, Fraction(0)) + w

    if isinstance(p, ProtocolMixture):
        for w, comp in p.components:
            for k, q in _alice_view(comp, x, y).items():
                add(k, w * q)
        return out
    _check_limit(p.t)
    w = Fraction(1, 1 << p.t) if p.t else Fraction(1)
    for u in range(1 << p.t):
        if isinstance(p, ParallelXorProtocol):
            add((u, p.local_a[x] ^ _parity(u)), w)
        elif isinstance(p, ParallelProtocol):
            add((u, p.out_a[x][u]), w)
        elif isinstance(p, OrderedNlbProtocol):
            a, _b = _run_ordered(p, x, y, u)
            add((u, a), w)
        elif isinstance(p, GeneralNlbProtocol):
            a, _b, _ = _run_general(p, x, y, u)
            add((u, a), w)
        else:
            raise ProtocolError("non-signaling audit applies to NLB protocols")
    return out


def _bob_view(p, x: int, y: int) -> dict[tuple, Fraction]:
    out: dict[tuple, Fraction] = {}

    def add(key, w):
        out[key] = out.get(key, Fraction(0)) + w

    if isinstance(p, ProtocolMixture):
        for w, comp in p.components:
            for k, q in _bob_view(comp, x, y).items():
                add(k, w * q)
        return out
    _check_limit(p.t)
    w = Fraction(1, 1 << p.t) if p.t else Fraction(1)
    shift = None
    if isinstance(p, (ParallelXorProtocol, ParallelProtocol)):
        shift = _xor_shift(p, x, y)
    for u in range(1 << p.t):
        if isinstance(p, ParallelXorProtocol):
            bvec = u ^ shift
            add((bvec, p.local_b[y] ^ _parity(bvec)), w)
        elif isinstance(p, ParallelProtocol):
            bvec = u ^ shift
            add((bvec, p.out_b[y][bvec]), w)
        elif isinstance(p, OrderedNlbProtocol):
            avec, bvec = u, 0
            for i in range(p.t):
                pi = p.step_a[i][x][avec & ((1 << i) - 1)]
                qi = p.step_b[i][y][bvec & ((1 << i) - 1)]
                bvec |= (((u >> i) & 1) ^ (pi & qi)) << i
            add((bvec, p.out_b[y][bvec]), w)
        elif isinstance(p, GeneralNlbProtocol):
            _a, b, (_u, bvec, _pin, _qin) = _run_general(p, x, y, u)
            add((bvec, b), w)
        else:
            raise ProtocolError("non-signaling audit applies to NLB protocols")
    return out


def nonsignaling_audit(p) -> AuditViolation | None:
    """Check each player's full-view distribution ignores the other's input."""
    xs, ys = 1 << p.nx, 1 << p.ny
    for x in range(xs):
        ref = _alice_view(p, x, 0)
        for y in range(1, ys):
            v = _alice_view(p, x, y)
            if v != ref:
                return AuditViolation("nonsignaling", "Alice view depends on y",
                                      (x, 0, y))
    for y in range(ys):
        ref = _bob_view(p, 0, y)
        for x in range(1, xs):
            v = _bob_view(p, x, y)
            if v != ref:
                return AuditViolation("nonsignaling", "Bob view depends on x",
                                      (y, 0, x))
    return None


def privacy_audit_and(p: AndProtocol, f: TruthTable) -> AuditViolation | None:
    """Correctness plus perfect Alice-side privacy of a secure-AND protocol.

    Alice's received gate vector may depend on (x, f(x,y)) only; Bob
    receives nothing, so his side is private by construction.
    """
    if (p.nx, p.ny) != (f.nx, f.ny):
        raise ProtocolError("domain mismatch")
    for x in range(f.n_rows):
        by_value: dict[int, int] = {}
        for y in range(f.n_cols):
            v = p.gate_vector(x, y)
            if p.out_a[x][v] != f.entry(x, y):
                return AuditViolation("and-correctness",
                                      "Alice output differs from f", (x, y))
            fv = f.entry(x, y)
            if fv in by_value and by_value[fv] != v:
                y0 = next(y2 for y2 in range(f.n_cols)
                          if p.gate_vector(x, y2) == by_value[fv]
                          and f.entry(x, y2) == fv)
                return AuditViolation("and-privacy",
                                      "gate vector not determined by (x, f)",
                                      (x, y0, y))
            by_value[fv] = v
        if len(set(by_value.values())) > 2:
            return AuditViolation("and-privacy", ">2 gate vectors for one x", (x,))
    return None


def privacy_audit_ot(p: OtProtocol) -> AuditViolation | None:
    """Bob's received bits must be exactly uniform and independent of x."""
    uniform = Fraction(1, 1 << p.t)
    for y in range(1 << p.ny):
        for x in range(1 << p.nx):
            dist = ot_received_distribution(p, x, y)
            if len(dist) != 1 << p.t or any(v != uniform for v in dist.values()):
                return AuditViolation("ot-privacy",
                                      "received bits not uniform", (x, y, dist))
    return None


__all__ = [
    "OutcomeDistribution", "ErrorProfile", "AuditViolation",
    "ResourceLimitError", "ProtocolError",
    "exec_exact", "exec_sample", "error_profile", "validate",
    "nonsignaling_audit", "privacy_audit_and", "privacy_audit_ot",
    "exec_exact_ordered_sweep", "ot_received_distribution", "derive_seed",
]
