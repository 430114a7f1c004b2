"""The graphs Gamma_X and Delta_X on the even external points joined to
X = <1> by external lines.

Adjacency follows the four-sign cone criterion: A ~ B when, for all four
sign choices (x, y) in {2a+-a} x {2b+-b}, the quantity -tr(f(x,y)^2) is a
nonzero square of F_q (the three cones over X, A, B then share no external
point).  Gamma_X additionally excludes pairs collinear with X; Delta_X makes
them adjacent, matching the reference treatment of the degenerate case.

The bulk builder evaluates -tr(f(x,y)^2) through its trace expansion
32 (tr(a)+-2a)(tr(b)+-2b)(tr(ab)-+ab), an identity proven in the source
material with no side conditions; edge-by-edge agreement with the literal
per-pair evaluation and with a brute-force cone-intersection oracle is
enforced by the test suite for all small q.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DependentWithOne, NotOnTangentLine
from .field import FieldCtx, SquareClass, sqrt_base, square_class, trace
from .projective import (
    LineType,
    ProjPoint,
    canonical_point,
    collinear_with_one,
    line_type,
    point_kind_codes,
)

_GRAPH_CACHE: dict[tuple, tuple] = {}


@dataclass(frozen=True)
class Graph:
    """Dense undirected graph with bitset adjacency rows.

    Bit j of row i (little-endian within uint64 words) is set iff i ~ j.
    ``labels`` maps vertex index -> canonical point rep log, ascending;
    skeletons read back from DIMACS carry no labels.
    """

    n: int
    adj_words: np.ndarray
    kind: str | None = None
    q: int | None = None
    labels: np.ndarray | None = None
    modulus: tuple[int, ...] | None = None

    @property
    def words_per_row(self) -> int:
        return self.adj_words.shape[1]

    def has_edge(self, i: int, j: int) -> bool:
        return bool((self.adj_words[i, j >> 6] >> np.uint64(j & 63)) & np.uint64(1))

    def degree_array(self) -> np.ndarray:
        return np.bitwise_count(self.adj_words).sum(axis=1).astype(np.int64)

    def edge_count(self) -> int:
        return int(self.degree_array().sum()) // 2

    def neighbors(self, i: int) -> np.ndarray:
        bits = np.unpackbits(self.adj_words[i].view(np.uint8), bitorder="little")
        return np.flatnonzero(bits[: self.n]).astype(np.int64)

    def row_int(self, i: int) -> int:
        return int.from_bytes(self.adj_words[i].tobytes(), "little")

    def edges(self):
        for i in range(self.n):
            for j in self.neighbors(i):
                if j > i:
                    yield (i, int(j))

    def is_clique(self, vertices) -> bool:
        vs = list(vertices)
        return all(self.has_edge(u, v) for k, u in enumerate(vs) for v in vs[k + 1:])


def pack_bool_rows(rows: np.ndarray) -> np.ndarray:
    """Pack a boolean (m, n) block into (m, ceil(n/64)) uint64 rows."""
    m, n = rows.shape
    nbytes = ((n + 63) // 64) * 8
    packed = np.packbits(np.ascontiguousarray(rows), axis=1, bitorder="little")
    if packed.shape[1] < nbytes:
        pad = np.zeros((m, nbytes - packed.shape[1]), dtype=np.uint8)
        packed = np.concatenate([packed, pad], axis=1)
    return np.ascontiguousarray(packed).view(np.uint64)


# --- vertex set -----------------------------------------------------------------


def vertex_reps(ctx: FieldCtx) -> np.ndarray:
    """Canonical rep logs of the vertex set: even external points Y != <1>
    with tr(y)^2 - 4 tr(y^2) a nonsquare, ascending."""
    E = ctx.base_embed_exp
    r = np.arange(E, dtype=np.int64)
    kinds = point_kind_codes(ctx)
    t = ctx.trace_fq[r]
    t2 = ctx.trace_fq[(2 * r) % ctx.n_units]
    four = int(ctx.int_code[4 % ctx.p])
    disc = ctx.fq_add[ctx.fq_mul[t, t], ctx.fq_neg[ctx.fq_mul[four, t2]]]
    nonsq = (disc != 0) & ~ctx.fq_is_square[disc]
    mask = (kinds == 1) & (r != 0) & nonsq
    return r[mask]


def vertex_set(ctx: FieldCtx) -> list[ProjPoint]:
    return [canonical_point(ctx, int(r)) for r in vertex_reps(ctx)]


# --- scalar cone conditions -------------------------------------------------------


def cone_condition(ctx: FieldCtx, alpha, beta) -> bool:
    """Four-sign criterion, evaluated literally: build f(x,y) as a field
    element and test -tr(f^2) for each (x, y) in {2a+-a} x {2b+-b}."""
    a_el = alpha.rep if isinstance(alpha, ProjPoint) else int(alpha)
    b_el = beta.rep if isinstance(beta, ProjPoint) else int(beta)
    if collinear_with_one(ctx, a_el, b_el):
        raise DependentWithOne("cone_condition needs {1, alpha, beta} independent")
    a = sqrt_base(ctx, trace(ctx, ctx.mul(a_el, a_el)))
    b = sqrt_base(ctx, trace(ctx, ctx.mul(b_el, b_el)))
    two = ctx.scalar(2)
    xs = [ctx.add(ctx.mul(two, a_el), a), ctx.sub(ctx.mul(two, a_el), a)]
    ys = [ctx.add(ctx.mul(two, b_el), b), ctx.sub(ctx.mul(two, b_el), b)]
    for x in xs:
        tx = trace(ctx, x)
        for y in ys:
            ty = trace(ctx, y)
            f = ctx.sub(ctx.mul(ty, x), ctx.mul(tx, y))
            val = ctx.neg(trace(ctx, ctx.mul(f, f)))
            if square_class(ctx, val) is not SquareClass.SQUARE:
                return False
    return True


def fast_cone_condition(ctx: FieldCtx, alpha, beta) -> bool:
    """Single-expression form: 2(tr(a)+2a)(tr(b)+2b)(tr(ab)-ab) a nonzero
    square.  Equals cone_condition whenever the line AB is external, which
    holds whenever either can be true."""
    a_el = alpha.rep if isinstance(alpha, ProjPoint) else int(alpha)
    b_el = beta.rep if isinstance(beta, ProjPoint) else int(beta)
    if collinear_with_one(ctx, a_el, b_el):
        raise DependentWithOne("fast_cone_condition needs {1, alpha, beta} independent")
    a = sqrt_base(ctx, trace(ctx, ctx.mul(a_el, a_el)))
    b = sqrt_base(ctx, trace(ctx, ctx.mul(b_el, b_el)))
    ta = trace(ctx, a_el)
    tb = trace(ctx, b_el)
    tab = trace(ctx, ctx.mul(a_el, b_el))
    two = ctx.scalar(2)
    expr = ctx.mul(two, ctx.mul(
        ctx.add(ta, ctx.mul(two, a)),
        ctx.mul(ctx.add(tb, ctx.mul(two, b)), ctx.sub(tab, ctx.mul(a, b)))))
    return square_class(ctx, expr) is SquareClass.SQUARE


# --- bulk builder ------------------------------------------------------------------


def _vertex_tables(ctx: FieldCtx, reps: np.ndarray, sqrt_sign: int):
    N = ctx.n_units
    t = ctx.trace_fq[reps].astype(np.int16)
    t2 = ctx.trace_fq[(2 * reps) % N]
    a = ctx.fq_sqrt[t2].astype(np.int16)
    if np.any(a < 0):
        raise AssertionError("vertex with nonsquare tr(y^2)")
    if sqrt_sign < 0:
        a = ctx.fq_neg[a].astype(np.int16)
    two = int(ctx.int_code[2 % ctx.p])
    twoa = ctx.fq_mul[two, a]
    u_plus = ctx.fq_add[t, twoa].astype(np.int16)
    u_minus = ctx.fq_add[t, ctx.fq_neg[twoa]].astype(np.int16)
    # collinearity key: log(y^q - y) mod E  (equal keys <=> collinear with <1>)
    fr = (reps * ctx.q) % N
    negy = (reps + ctx.half) % N
    dvec = ctx.zech[(negy - fr) % N]
    if np.any(dvec == N):
        raise AssertionError("vertex rep inside F_q")
    dkey = ((fr + dvec) % N) % ctx.base_embed_exp
    return t, a, u_plus, u_minus, dkey


def _build_both(ctx: FieldCtx, sqrt_sign: int = 1):
    reps = vertex_reps(ctx)
    n = len(reps)
    N = ctx.n_units
    t, a, u_plus, u_minus, dkey = _vertex_tables(ctx, reps, sqrt_sign)

    two = int(ctx.int_code[2 % ctx.p])
    # class of -tr(f^2) = class of 2 * (sign expression); fold the 2 in
    issq2 = ctx.fq_is_square[ctx.fq_mul[two, np.arange(ctx.q, dtype=np.int64)]]

    words = (n + 63) // 64
    g_rows = np.empty((n, words), dtype=np.uint64)
    d_rows = np.empty((n, words), dtype=np.uint64)
    fq_mul, fq_add, fq_neg = ctx.fq_mul, ctx.fq_add, ctx.fq_neg

    block = max(1, min(512, 1 << 24 >> max(n.bit_length(), 1)))
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        ri = reps[lo:hi, None]
        tab = ctx.trace_fq[(ri + reps[None, :]) % N]
        ab = fq_mul[a[lo:hi, None], a[None, :]]
        tm = fq_add[tab, fq_neg[ab]]
        tp = fq_add[tab, ab]
        e = fq_mul[fq_mul[u_plus[lo:hi, None], u_plus[None, :]], tm]
        cone = issq2[e]
        e = fq_mul[fq_mul[u_minus[lo:hi, None], u_plus[None, :]], tp]
        cone &= issq2[e]
        e = fq_mul[fq_mul[u_minus[lo:hi, None], u_minus[None, :]], tm]
        cone &= issq2[e]
        e = fq_mul[fq_mul[u_plus[lo:hi, None], u_minus[None, :]], tp]
        cone &= issq2[e]
        dep = dkey[lo:hi, None] == dkey[None, :]
        idx = np.arange(lo, hi)
        gamma = cone & ~dep
        delta = cone | dep
        delta[np.arange(hi - lo), idx] = False
        g_rows[lo:hi] = pack_bool_rows(gamma)
        d_rows[lo:hi] = pack_bool_rows(delta)

    common = dict(n=n, q=ctx.q, labels=reps, modulus=ctx.modulus)
    return (Graph(adj_words=g_rows, kind="gamma", **common),
            Graph(adj_words=d_rows, kind="delta", **common))


def _cached_graphs(ctx: FieldCtx):
    key = (ctx.q, ctx.modulus)
    got = _GRAPH_CACHE.get(key)
    if got is None:
        got = _build_both(ctx)
        _GRAPH_CACHE[key] = got
    return got


def build_gamma(ctx: FieldCtx) -> Graph:
    return _cached_graphs(ctx)[0]


def build_delta(ctx: FieldCtx) -> Graph:
    return _cached_graphs(ctx)[1]


def build_graphs_with_negated_roots(ctx: FieldCtx):
    """Rebuild both graphs using the negated canonical square roots;
    adjacency must be identical (root-choice invariance)."""
    return _build_both(ctx, sqrt_sign=-1)


# --- cocliques from cones -----------------------------------------------------------


def coclique_from_cone(ctx: FieldCtx, graph: Graph, Y) -> np.ndarray:
    """Vertex indices of the set V intersect cone(Y) minus the line XY, for an
    even external Y on a tangent line through X; a coclique of Delta_X of
    size q(q-1)/2."""
    y = (Y.rep if isinstance(Y, ProjPoint) else int(Y)) % ctx.base_embed_exp
    P = canonical_point(ctx, y)
    if P.q_class is not SquareClass.SQUARE:
        raise NotOnTangentLine("Y must be an even external point")
    if y == 0 or line_type(ctx, 0, y) is not LineType.TANGENT:
        raise NotOnTangentLine("line XY must be tangent to the quadric")
    reps = graph.labels
    N = ctx.n_units
    # on cone(Y): tr(y r)^2 == tr(y^2) tr(r^2)
    tyr = ctx.trace_fq[(y + reps) % N]
    ty2 = int(ctx.trace_fq[(2 * y) % N])
    tr2 = ctx.trace_fq[(2 * reps) % N]
    lhs = ctx.fq_mul[tyr, tyr]
    rhs = ctx.fq_mul[ty2, tr2]
    on_cone = ctx.fq_add[lhs, ctx.fq_neg[rhs]] == 0
    # off the line XY: collinearity key differs from Y's
    _, _, _, _, dkey = _vertex_tables(ctx, reps, 1)
    fr = (y * ctx.q) % N
    dv = int(ctx.zech[((y + ctx.half) % N - fr) % N])
    ykey = ((fr + dv) % N) % ctx.base_embed_exp
    sel = np.flatnonzero(on_cone & (dkey != ykey)).astype(np.int64)
    expected = ctx.q * (ctx.q - 1) // 2
    if len(sel) != expected:
        raise AssertionError(f"coclique size {len(sel)} != q(q-1)/2 = {expected}")
    return sel
