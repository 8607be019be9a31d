"""Correlation matrices, their exact simulation, and the Regev-Toner
3-box simulation of two-outcome measurements on entangled states.

Correlation matrices are exact rationals end to end; the measurement
simulation uses double-precision reals internally but every asserted
equality there is on discrete outputs (signs and bits), never floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import truthtable as tt
from .compilers import synth_rank
from .engine import derive_seed
from .protocols import ParallelXorProtocol, ProtocolMixture

UNIT_TOL = 1e-9


@dataclass(frozen=True)
class CorrelationMatrix:
    """Table of Pr[a XOR b = 1 | x, y] for a uniform-marginal binary
    non-signaling distribution."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.entries or not self.entries[0]:
            raise ValueError("empty correlation matrix")
        width = len(self.entries[0])
        for row in self.entries:
            if len(row) != width:
                raise ValueError("ragged correlation matrix")
            if any(not 0 <= v <= 1 for v in row):
                raise ValueError("entries must lie in [0, 1]")

    @property
    def n_rows(self) -> int:
        return len(self.entries)

    @property
    def n_cols(self) -> int:
        return len(self.entries[0])


def correlation_of_table(m: tt.TruthTable) -> CorrelationMatrix:
    return CorrelationMatrix(tuple(tuple(Fraction(m.entry(x, y))
                                         for y in range(m.n_cols))
                                   for x in range(m.n_rows)))


def parse_correlation(text: str) -> CorrelationMatrix:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty correlation file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "corr":
        raise ValueError("header must be 'corr |X| |Y|'")
    rows, cols = int(head[1]), int(head[2])
    toks = " ".join(lines[1:]).split()
    if len(toks) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(toks)}")

    def frac(tok: str) -> Fraction:
        num, den = tok.split("/")
        return Fraction(int(num), int(den))

    return CorrelationMatrix(tuple(tuple(frac(toks[x * cols + y])
                                         for y in range(cols))
                                   for x in range(rows)))


def format_correlation(c: CorrelationMatrix) -> str:
    out = [f"corr {c.n_rows} {c.n_cols}"]
    for row in c.entries:
        out.append(" ".join(f"{v.numerator}/{v.denominator}" for v in row))
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class BooleanMixture:
    """Convex combination of Boolean matrices averaging to a target."""

    components: tuple[tuple[Fraction, tt.TruthTable], ...]

    def reconstruct(self) -> CorrelationMatrix:
        w0, m0 = self.components[0]
        acc = [[w0 * m0.entry(x, y) for y in range(m0.n_cols)]
               for x in range(m0.n_rows)]
        for w, m in self.components[1:]:
            for x in range(m.n_rows):
                for y in range(m.n_cols):
                    acc[x][y] += w * m.entry(x, y)
        return CorrelationMatrix(tuple(tuple(row) for row in acc))


def _log2_ceil(n: int) -> int:
    return (n - 1).bit_length()


def layercake_decompose(c: CorrelationMatrix) -> BooleanMixture:
    """Write c as a convex combination of its threshold matrices.

    Sorting the distinct positive levels u_1 < ... < u_k, the matrix
    [c >= u_j] receives weight u_j - u_{j-1}; the all-zero matrix soaks
    up the remaining 1 - u_k so weights always sum to one.
    """
    nx = _log2_ceil(c.n_rows) if c.n_rows > 1 else 0
    ny = _log2_ceil(c.n_cols) if c.n_cols > 1 else 0
    if c.n_rows != 1 << nx or c.n_cols != 1 << ny:
        raise ValueError("correlation dimensions must be powers of two")
    levels = sorted({v for row in c.entries for v in row if v > 0})
    comps = []
    prev = Fraction(0)
    for u in levels:
        m = tt.from_entries(nx, ny, [[1 if v >= u else 0 for v in row]
                                     for row in c.entries])
        comps.append((u - prev, m))
        prev = u
    if prev < 1:
        comps.append((1 - prev, tt.TruthTable(nx, ny, (0,) * (1 << nx))))
    return BooleanMixture(tuple(comps))


def _pad_boxes(p: ParallelXorProtocol, t: int) -> ParallelXorProtocol:
    if p.t == t:
        return p
    dead_p = ((0,) * (1 << p.nx),) * (t - p.t)
    dead_q = ((0,) * (1 << p.ny),) * (t - p.t)
    return ParallelXorProtocol(p.nx, p.ny, t, p.pbox + dead_p, p.qbox + dead_q,
                               p.local_a, p.local_b)


def simulate_distribution(c: CorrelationMatrix) -> ProtocolMixture:
    """Protocol mixture whose output parity reproduces c entrywise.

    Each layer-cake component is rank-synthesized; a shared random flip
    of both outputs (applied as a half-weight twin with inverted local
    terms) makes each player's marginal exactly uniform.
    """
    mix = layercake_decompose(c)
    protos = [(w, synth_rank(m)) for w, m in mix.components]
    t = max(p.t for _w, p in protos)
    comps = []
    for w, p in protos:
        p = _pad_boxes(p, t)
        flipped = ParallelXorProtocol(
            p.nx, p.ny, p.t, p.pbox, p.qbox,
            tuple(v ^ 1 for v in p.local_a), tuple(v ^ 1 for v in p.local_b))
        comps.append((w / 2, p))
        comps.append((w / 2, flipped))
    return ProtocolMixture(tuple(comps))


# --- Regev-Toner measurement simulation ---


def _sgn(v) -> int:
    """Sign with the fixed convention sgn(0) = +1."""
    return 1 if v >= 0 else -1


def _gram_schmidt(rows: np.ndarray) -> np.ndarray:
    g = rows.astype(np.float64).copy()
    for i in range(g.shape[0]):
        for j in range(i):
            g[i] -= (g[i] @ g[j]) * g[j]
        g[i] /= np.linalg.norm(g[i])
    return g


@dataclass(frozen=True)
class RtContext:
    """Projection context for the 3-box measurement simulation.

    ``g`` projects onto a random 3-dimensional subspace; ``transform_c``
    is the pluggable unit-vector map applied before projection (identity
    by default — the exact quantum correlation needs an externally
    defined transformation, so only discrete-output identities are
    asserted against this context).
    """

    dim: int
    g: np.ndarray
    seed: int
    transform_c: Callable[[np.ndarray], np.ndarray] = field(default=lambda v: v)

    def __post_init__(self):
        if self.g.shape != (3, self.dim):
            raise ValueError("projector must be 3 x dim")
        defect = np.abs(self.g @ self.g.T - np.eye(3)).max()
        if defect > UNIT_TOL:
            raise ValueError("projector rows must be orthonormal")


def make_context(dim: int, seed: int,
                 transform_c: Callable[[np.ndarray], np.ndarray] | None = None,
                 g: np.ndarray | None = None) -> RtContext:
    if g is None:
        rng = np.random.default_rng(derive_seed(seed, 0))
        g = _gram_schmidt(rng.standard_normal((3, dim)))
    if transform_c is None:
        return RtContext(dim, g, seed)
    return RtContext(dim, g, seed, transform_c)


def _project(v: np.ndarray, ctx: RtContext) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (ctx.dim,):
        raise ValueError(f"vector must have dimension {ctx.dim}")
    if abs(np.linalg.norm(v) - 1.0) > 1e-6:
        raise ValueError("input must be a unit vector")
    w = np.asarray(ctx.transform_c(v), dtype=np.float64)
    if abs(np.linalg.norm(w) - 1.0) > 1e-6:
        raise ValueError("transform_c must preserve unit norm")
    return ctx.g @ w


def rt_comm(x, y, ctx: RtContext) -> tuple[int, int]:
    """Two-bit-communication simulation: Alice sends her sign pattern."""
    x2 = _project(x, ctx)
    y2 = _project(y, ctx)
    alpha = [_sgn(v) for v in x2]
    c1, c2 = alpha[0] * alpha[1], alpha[0] * alpha[2]
    b = _sgn(y2[0] + c1 * y2[1] + c2 * y2[2])
    return alpha[0], b


BOX_LABELS = ((1, -1), (-1, 1), (-1, -1))


def rt_nlb(x, y, ctx: RtContext, box_seed: int) -> tuple[int, int]:
    """Three-box simulation replacing the two-bit message of rt_comm.

    Alice raises the box matching her sign pattern (none for (+1,+1));
    Bob inputs whether receiving that pattern would flip his answer
    relative to (+1,+1).  Both XOR their outcomes into their outputs.
    """
    x2 = _project(x, ctx)
    y2 = _project(y, ctx)
    alpha = [_sgn(v) for v in x2]
    c = (alpha[0] * alpha[1], alpha[0] * alpha[2])
    b_ref = _sgn(y2[0] + y2[1] + y2[2])
    rng = np.random.default_rng(derive_seed(box_seed, 1))
    a_par = b_par = 0
    for m, label in enumerate(BOX_LABELS):
        p = 1 if c == label else 0
        q = (1 - _sgn(y2[0] + label[0] * y2[1] + label[1] * y2[2]) * b_ref) // 2
        a_m = int(rng.integers(0, 2))
        b_m = a_m ^ (p & q)
        a_par ^= a_m
        b_par ^= b_m
    return alpha[0] * (-1) ** a_par, b_ref * (-1) ** b_par


def rt_trials(dim: int, n_trials: int, seed: int):
    """Vectorized coupled trials with fresh G, x, y per trial.

    Returns arrays (a_comm, b_comm, a_nlb, b_nlb) of +/-1 values; the
    products a*b of the two simulations agree trial by trial for any
    transform (here: identity), which is the transport identity the
    3-box construction guarantees.
    """
    rng = np.random.default_rng(derive_seed(seed, 2))
    xs = rng.standard_normal((n_trials, dim))
    ys = rng.standard_normal((n_trials, dim))
    xs /= np.linalg.norm(xs, axis=1, keepdims=True)
    ys /= np.linalg.norm(ys, axis=1, keepdims=True)
    # batched Gram-Schmidt for the 3 x dim projectors
    g = rng.standard_normal((n_trials, 3, dim))
    g[:, 0] /= np.linalg.norm(g[:, 0], axis=1, keepdims=True)
    for i in (1, 2):
        for j in range(i):
            g[:, i] -= np.einsum("td,td->t", g[:, i], g[:, j])[:, None] * g[:, j]
        g[:, i] /= np.linalg.norm(g[:, i], axis=1, keepdims=True)
    x2 = np.einsum("tkd,td->tk", g, xs)
    y2 = np.einsum("tkd,td->tk", g, ys)
    alpha = np.where(x2 >= 0, 1, -1)
    c1, c2 = alpha[:, 0] * alpha[:, 1], alpha[:, 0] * alpha[:, 2]
    a_comm = alpha[:, 0]
    b_comm = np.where(y2[:, 0] + c1 * y2[:, 1] + c2 * y2[:, 2] >= 0, 1, -1)
    b_ref = np.where(y2.sum(axis=1) >= 0, 1, -1)
    labels = np.array(BOX_LABELS)
    p = ((c1[:, None] == labels[None, :, 0])
         & (c2[:, None] == labels[None, :, 1])).astype(np.int64)
    s = np.where(y2[:, None, 0] + labels[None, :, 0] * y2[:, None, 1]
                 + labels[None, :, 1] * y2[:, None, 2] >= 0, 1, -1)
    q = (1 - s * b_ref[:, None]) // 2
    a_bits = rng.integers(0, 2, size=(n_trials, 3))
    b_bits = a_bits ^ (p & q)
    a_nlb = a_comm * (-1) ** (a_bits.sum(axis=1) & 1)
    b_nlb = b_ref * (-1) ** (b_bits.sum(axis=1) & 1)
    return a_comm, b_comm, a_nlb, b_nlb
