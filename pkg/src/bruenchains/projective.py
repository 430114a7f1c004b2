"""Points of PG(3,q) inside F_{q^4}, the elliptic quadric Q(x) = tr(x^2),
incidence predicates, and cones.

A projective point <x> is the F_q-scalar class {lam*x}; its canonical
representative is the class member with minimal log, which is log(x) mod E
with E = (q^4-1)/(q-1).  Point representatives therefore range over
[0, E-1], a Singer-cycle labelling of the q^3+q^2+q+1 points.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    DependentTriple,
    DuplicatePoint,
    InBaseField,
    PointOnQuadric,
    SamePoint,
    VertexOnQuadric,
    ZeroTrace,
    ZeroTraceSquare,
    ZeroVector,
)
from .field import FieldCtx, SquareClass, coords


class PointKind(enum.Enum):
    SINGULAR = 0
    EVEN_EXTERNAL = 1
    ODD_EXTERNAL = 2


class LineType(enum.Enum):
    EXTERNAL = 0
    TANGENT = 1
    SECANT = 2


@dataclass(frozen=True)
class ProjPoint:
    """A point of PG(3,q) with its quadratic-form class cached."""

    rep: int           # canonical element log, in [0, E-1]
    q_class: SquareClass
    point_kind: PointKind


_KIND_BY_CLASS = {
    SquareClass.ZERO: PointKind.SINGULAR,
    SquareClass.SQUARE: PointKind.EVEN_EXTERNAL,
    SquareClass.NONSQUARE: PointKind.ODD_EXTERNAL,
}


def _rep(x) -> int:
    return x.rep if isinstance(x, ProjPoint) else int(x)


def canonical_point(ctx: FieldCtx, x) -> ProjPoint:
    """Canonical representative of the projective class of x; idempotent."""
    x = _rep(x)
    if x == ctx.zero:
        raise ZeroVector("the zero element defines no point")
    r = x % ctx.base_embed_exp
    t2 = int(ctx.trace_fq[(2 * r) % ctx.n_units])
    if t2 == 0:
        cls = SquareClass.ZERO
    elif ctx.fq_is_square[t2]:
        cls = SquareClass.SQUARE
    else:
        cls = SquareClass.NONSQUARE
    return ProjPoint(rep=r, q_class=cls, point_kind=_KIND_BY_CLASS[cls])


def num_points(ctx: FieldCtx) -> int:
    return ctx.base_embed_exp


def point_kind_codes(ctx: FieldCtx) -> np.ndarray:
    """Kind of every point of PG(3,q), indexed by canonical rep log.

    0 singular, 1 even external, 2 odd external.
    """
    r = np.arange(ctx.base_embed_exp, dtype=np.int64)
    t2 = ctx.trace_fq[(2 * r) % ctx.n_units]
    return np.where(t2 == 0, 0, np.where(ctx.fq_is_square[t2], 1, 2)).astype(np.int8)


def singular_points(ctx: FieldCtx) -> np.ndarray:
    return np.flatnonzero(point_kind_codes(ctx) == 0).astype(np.int64)


def external_points(ctx: FieldCtx) -> np.ndarray:
    return np.flatnonzero(point_kind_codes(ctx) != 0).astype(np.int64)


# --- internal F_q-code helpers -------------------------------------------------

def _tr_code(ctx, x: int) -> int:
    return int(ctx.trace_fq[x % ctx.n_units])


def _line_disc_code(ctx, a: int, b: int) -> int:
    """tr(ab)^2 - tr(a^2) tr(b^2) as an F_q code."""
    tab = _tr_code(ctx, a + b)
    ta2 = _tr_code(ctx, 2 * a)
    tb2 = _tr_code(ctx, 2 * b)
    lhs = int(ctx.fq_mul[tab, tab])
    rhs = int(ctx.fq_mul[ta2, tb2])
    return int(ctx.fq_add[lhs, ctx.fq_neg[rhs]])


def _code_class(ctx, code: int) -> SquareClass:
    if code == 0:
        return SquareClass.ZERO
    return SquareClass.SQUARE if ctx.fq_is_square[code] else SquareClass.NONSQUARE


# --- predicates ------------------------------------------------------------------


def line_type(ctx: FieldCtx, A, B) -> LineType:
    """External / tangent / secant classification of the line through two
    external points, by the sign of tr(ab)^2 - tr(a^2)tr(b^2)."""
    a, b = _rep(A) % ctx.base_embed_exp, _rep(B) % ctx.base_embed_exp
    if a == b:
        raise SamePoint("line_type needs two distinct points")
    if _tr_code(ctx, 2 * a) == 0 or _tr_code(ctx, 2 * b) == 0:
        raise PointOnQuadric("line_type is defined for points off the quadric")
    cls = _code_class(ctx, _line_disc_code(ctx, a, b))
    if cls is SquareClass.NONSQUARE:
        return LineType.EXTERNAL
    if cls is SquareClass.ZERO:
        return LineType.TANGENT
    return LineType.SECANT


def collinear_with_one(ctx: FieldCtx, alpha, beta) -> bool:
    """True iff {1, alpha, beta} is F_q-linearly dependent, i.e. <1>, <alpha>,
    <beta> are collinear.  Uses (alpha^q - alpha)/(beta^q - beta) in F_q."""
    a, b = _rep(alpha), _rep(beta)
    for x in (a, b):
        if ctx.in_base_field(x):
            raise InBaseField("collinear_with_one needs elements outside F_q")
    da = ctx.sub(ctx.frobenius(a), a)
    db = ctx.sub(ctx.frobenius(b), b)
    return da % ctx.base_embed_exp == db % ctx.base_embed_exp


def _point_coords_codes(ctx, r: int) -> list[int]:
    return [ctx.code_of(c) for c in coords(ctx, r)]


def _rank_fq(ctx, rows: list[list[int]]) -> int:
    """Row rank over F_q of a small code matrix (destroys its copy)."""
    add, mul, inv, neg = ctx.fq_add, ctx.fq_mul, ctx.fq_inv, ctx.fq_neg
    mat = [list(r) for r in rows]
    rank = 0
    ncols = len(mat[0])
    for col in range(ncols):
        piv = None
        for r in range(rank, len(mat)):
            if mat[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        s = int(inv[mat[rank][col]])
        mat[rank] = [int(mul[s, v]) for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [int(add[mat[r][j], neg[mul[f, mat[rank][j]]]])
                          for j in range(ncols)]
        rank += 1
    return rank


def collinear(ctx: FieldCtx, A, B, C) -> bool:
    """True iff the three (pairwise distinct) points lie on one line."""
    reps = [_rep(P) % ctx.base_embed_exp for P in (A, B, C)]
    if len(set(reps)) != 3:
        raise DuplicatePoint("collinear needs pairwise distinct points")
    rows = [_point_coords_codes(ctx, r) for r in reps]
    return _rank_fq(ctx, rows) <= 2


def tangent_plane_test(ctx: FieldCtx, gamma, delta, eps) -> bool:
    """Lemma-style closed form: do three independent elements with nonzero
    tr of squares span a tangent plane to the quadric?"""
    g, d, e = (_rep(v) for v in (gamma, delta, eps))
    rows = [_point_coords_codes(ctx, v) for v in (g, d, e)]
    if _rank_fq(ctx, rows) != 3:
        raise DependentTriple("tangent_plane_test needs an independent triple")
    tg2, td2, te2 = (_tr_code(ctx, 2 * v) for v in (g, d, e))
    if 0 in (tg2, td2, te2):
        raise ZeroTraceSquare("tangent_plane_test needs tr of all squares nonzero")
    tde = _tr_code(ctx, d + e)
    teg = _tr_code(ctx, e + g)
    tgd = _tr_code(ctx, g + d)
    mul, add, neg = ctx.fq_mul, ctx.fq_add, ctx.fq_neg
    acc = int(mul[mul[tg2, td2], te2])
    acc = int(add[acc, neg[mul[tg2, mul[tde, tde]]]])
    acc = int(add[acc, neg[mul[td2, mul[teg, teg]]]])
    acc = int(add[acc, neg[mul[te2, mul[tgd, tgd]]]])
    two = int(ctx.int_code[2 % ctx.p])
    acc = int(add[acc, mul[two, mul[tgd, mul[tde, teg]]]])
    return acc == 0


def cone_contains(ctx: FieldCtx, A, Y) -> bool:
    """True iff Y lies on the cone with vertex A (Y = A, or line AY tangent)."""
    a = _rep(A) % ctx.base_embed_exp
    y = _rep(Y) % ctx.base_embed_exp
    if _tr_code(ctx, 2 * a) == 0:
        raise VertexOnQuadric("cone vertex must lie off the quadric")
    if a == y:
        return True
    return _line_disc_code(ctx, a, y) == 0


def polar_form(ctx: FieldCtx, P):
    """The polar plane of P as a functional x -> tr(rep(P) * x)."""
    pl = _rep(P) % ctx.base_embed_exp

    def functional(x) -> int:
        return int(ctx.fq_biglog[ctx.trace_fq[(pl + _rep(x)) % ctx.n_units]])

    return functional


# --- enumeration helpers (oracles over small spans) ------------------------------


def points_on_line(ctx: FieldCtx, A, B) -> list[int]:
    """Canonical reps of the q+1 points on the line through A and B."""
    a, b = _rep(A), _rep(B)
    pts = {b % ctx.base_embed_exp}
    for code in range(ctx.q):
        lam = int(ctx.fq_biglog[code])
        x = ctx.add(a, ctx.mul(lam, b))
        if x == ctx.zero:
            raise SamePoint("points_on_line needs independent representatives")
        pts.add(x % ctx.base_embed_exp)
    if len(pts) != ctx.q + 1:
        raise SamePoint("points_on_line needs independent representatives")
    return sorted(pts)


def points_on_plane(ctx: FieldCtx, A, B, C) -> list[int]:
    """Canonical reps of the q^2+q+1 points of the plane spanned by A, B, C."""
    a, b, c = _rep(A), _rep(B), _rep(C)
    pts = set()
    for code1 in range(ctx.q):
        lam = int(ctx.fq_biglog[code1])
        bl = ctx.add(b, ctx.mul(lam, c))
        if bl != ctx.zero:
            pts.add(bl % ctx.base_embed_exp)
        for code2 in range(ctx.q):
            mu = int(ctx.fq_biglog[code2])
            x = ctx.add(a, ctx.add(ctx.mul(lam, b), ctx.mul(mu, c)))
            if x != ctx.zero:
                pts.add(x % ctx.base_embed_exp)
    pts.add(c % ctx.base_embed_exp)
    if len(pts) != ctx.q**2 + ctx.q + 1:
        raise DependentTriple("points_on_plane needs an independent triple")
    return sorted(pts)


def quadric_count_on_line(ctx: FieldCtx, A, B) -> int:
    kinds = point_kind_codes(ctx)
    return int(sum(1 for r in points_on_line(ctx, A, B) if kinds[r] == 0))


def _kernel_basis_2d(ctx, d: int, e: int) -> list[int]:
    """Two independent elements spanning {x : tr(dx) = tr(ex) = 0}."""
    rows = [[_tr_code(ctx, (v + j) % ctx.n_units) for j in range(4)] for v in (d, e)]
    add, mul, inv, neg = ctx.fq_add, ctx.fq_mul, ctx.fq_inv, ctx.fq_neg
    mat = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(4):
        piv = None
        for r in range(rank, 2):
            if mat[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        s = int(inv[mat[rank][col]])
        mat[rank] = [int(mul[s, v]) for v in mat[rank]]
        for r in range(2):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [int(add[mat[r][j], neg[mul[f, mat[rank][j]]]]) for j in range(4)]
        pivots.append(col)
        rank += 1
    if rank != 2:
        raise DependentTriple("delta and epsilon must be F_q-independent")
    free = [c for c in range(4) if c not in pivots]
    basis = []
    one = 1  # code of 1
    for fc in free:
        vec = [0, 0, 0, 0]
        vec[fc] = one
        for r, pc in enumerate(pivots):
            vec[pc] = int(neg[mat[r][fc]])
        from .field import from_coords
        basis.append(from_coords(ctx, [int(ctx.fq_biglog[v]) for v in vec]))
    return basis


def cone_line_intersections(ctx: FieldCtx, delta, eps) -> tuple[int, list[int]]:
    """Brute-force oracle: enumerate the q+1 points of the line
    {x : tr(delta x) = tr(eps x) = 0} and return those on the cone of <1>
    but off the quadric."""
    d, e = _rep(delta), _rep(eps)
    if _tr_code(ctx, d) == 0 or _tr_code(ctx, e) == 0:
        raise ZeroTrace("cone_line_intersections needs tr(delta) tr(eps) != 0")
    rows = [_point_coords_codes(ctx, v) for v in (ctx.one, d, e)]
    if _rank_fq(ctx, rows) != 3:
        raise DependentTriple("{1, delta, eps} must be F_q-independent")
    u, v = _kernel_basis_2d(ctx, d, e)
    hits = []
    for r in points_on_line(ctx, u, v):
        t = _tr_code(ctx, r)
        t2 = _tr_code(ctx, 2 * r)
        if t2 == 0:
            continue  # on the quadric
        four = int(ctx.int_code[4 % ctx.p])
        lhs = int(ctx.fq_mul[t, t])
        rhs = int(ctx.fq_mul[four, t2])
        if int(ctx.fq_add[lhs, ctx.fq_neg[rhs]]) == 0:
            hits.append(r)
    return len(hits), hits
