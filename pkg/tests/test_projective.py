import itertools

import numpy as np
import pytest

from oracles import PolyFieldOracle

from bruenchains.errors import (
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
from bruenchains.field import SquareClass, square_class, trace
from bruenchains.projective import (
    LineType,
    PointKind,
    canonical_point,
    collinear,
    collinear_with_one,
    cone_contains,
    cone_line_intersections,
    line_type,
    num_points,
    point_kind_codes,
    points_on_line,
    points_on_plane,
    polar_form,
    quadric_count_on_line,
    singular_points,
    tangent_plane_test,
    _point_coords_codes,
    _rank_fq,
)

from conftest import get_ctx


def refined_cone_line_prediction(ctx, d, e):
    """Count prediction for the cone-line oracle.

    Case split by the class of -tr(f^2) with f = tr(e) d - tr(d) e, refined
    for the degenerate tangent-plane case where the tangency point lies on
    <d, e> (tr(f^2) = 0): the line then only meets the cone inside the
    quadric, so no external intersection remains.
    """
    te, td = trace(ctx, e), trace(ctx, d)
    f = ctx.sub(ctx.mul(te, d), ctx.mul(td, e))
    cls = square_class(ctx, ctx.neg(trace(ctx, ctx.mul(f, f))))
    kinds = point_kind_codes(ctx)
    tangent = sum(1 for r in points_on_plane(ctx, ctx.one, d, e) if kinds[r] == 0) == 1
    if tangent:
        return {SquareClass.NONSQUARE: 1, SquareClass.ZERO: 0}[cls]
    return {SquareClass.NONSQUARE: 2, SquareClass.ZERO: 1, SquareClass.SQUARE: 0}[cls]


def test_canonical_point_basics():
    ctx = get_ctx(5)
    P = canonical_point(ctx, ctx.one)
    assert P.rep == 0 and P.point_kind is PointKind.EVEN_EXTERNAL
    # every scalar multiple lands on the same representative
    for c in range(1, 5):
        assert canonical_point(ctx, ctx.scalar(c)).rep == 0
    # class of z has logs {1, 157, 313, 469}; minimal is 1
    zP = canonical_point(ctx, 1)
    assert zP.rep == 1
    assert canonical_point(ctx, 157).rep == 1
    assert canonical_point(ctx, zP.rep) == zP  # idempotent
    with pytest.raises(ZeroVector):
        canonical_point(ctx, ctx.zero)


@pytest.mark.parametrize("q", [5, 7, 9])
def test_point_class_sizes(q):
    ctx = get_ctx(q)
    kinds = point_kind_codes(ctx)
    assert len(kinds) == q**3 + q**2 + q + 1
    assert int((kinds == 0).sum()) == q * q + 1
    assert int((kinds == 1).sum()) == q * (q * q + 1) // 2
    assert int((kinds == 2).sum()) == q * (q * q + 1) // 2


@pytest.mark.parametrize("q", [5, 7])
def test_line_type_vs_counting_exhaustive(q):
    ctx = get_ctx(q)
    kinds = point_kind_codes(ctx)
    ext = np.flatnonzero(kinds != 0).tolist()
    want_by_count = {0: LineType.EXTERNAL, 1: LineType.TANGENT, 2: LineType.SECANT}
    for a, b in itertools.combinations(ext, 2):
        assert line_type(ctx, a, b) is want_by_count[quadric_count_on_line(ctx, a, b)]


def test_line_type_errors_and_symmetry():
    ctx = get_ctx(5)
    kinds = point_kind_codes(ctx)
    ext = np.flatnonzero(kinds != 0)
    sing = np.flatnonzero(kinds == 0)
    a, b = int(ext[0]), int(ext[5])
    assert line_type(ctx, a, b) is line_type(ctx, b, a)
    with pytest.raises(SamePoint):
        line_type(ctx, a, a)
    with pytest.raises(PointOnQuadric):
        line_type(ctx, a, int(sing[0]))


def test_tangent_line_endpoints_share_isometry_type():
    # two external points on a tangent line have the same kind
    ctx = get_ctx(7)
    kinds = point_kind_codes(ctx)
    rng = np.random.default_rng(3)
    ext = np.flatnonzero(kinds != 0)
    checked = 0
    while checked < 1000:
        a, b = (int(x) for x in rng.choice(ext, size=2, replace=False))
        if line_type(ctx, a, b) is LineType.TANGENT:
            assert kinds[a] == kinds[b]
            checked += 1


def test_collinear_with_one():
    ctx = get_ctx(5)
    rng = np.random.default_rng(4)
    E = num_points(ctx)
    # beta - alpha in F_q and beta = lam*alpha are collinear cases
    a = 7
    assert collinear_with_one(ctx, a, ctx.add(a, ctx.scalar(3)))
    assert collinear_with_one(ctx, a, ctx.mul(ctx.scalar(2), a))
    with pytest.raises(InBaseField):
        collinear_with_one(ctx, ctx.one, a)
    # agreement with a rank-2 test on coords
    for _ in range(3000):
        x = int(rng.integers(1, ctx.n_units))
        y = int(rng.integers(1, ctx.n_units))
        if ctx.in_base_field(x) or ctx.in_base_field(y):
            continue
        rows = [_point_coords_codes(ctx, 0), _point_coords_codes(ctx, x),
                _point_coords_codes(ctx, y)]
        assert collinear_with_one(ctx, x, y) == (_rank_fq(ctx, rows) <= 2)


def test_collinear():
    ctx = get_ctx(5)
    a, b = 1, 7
    c = ctx.add(a, b)
    assert collinear(ctx, a, b, c)
    with pytest.raises(DuplicatePoint):
        collinear(ctx, a, b, a)
    # line-enumeration agreement
    rng = np.random.default_rng(5)
    E = num_points(ctx)
    for _ in range(300):
        x, y, z = (int(v) for v in rng.integers(0, E, size=3))
        if len({x % E, y % E, z % E}) != 3:
            continue
        try:
            on_line = z % E in points_on_line(ctx, x, y)
        except SamePoint:
            continue
        assert collinear(ctx, x, y, z) == on_line


def test_tangent_plane_test_polar_triple():
    # three independent points inside the polar plane of a quadric point
    # span that tangent plane
    ctx = get_ctx(5)
    kinds = point_kind_codes(ctx)
    g = int(singular_points(ctx)[0])
    plane = [r for r in range(num_points(ctx))
             if ctx.trace_fq[(g + r) % ctx.n_units] == 0]
    # pick an independent triple with nonzero tr of squares
    for tri in itertools.combinations(plane, 3):
        if any(kinds[t] == 0 for t in tri):
            continue
        rows = [_point_coords_codes(ctx, t) for t in tri]
        if _rank_fq(ctx, rows) == 3:
            assert tangent_plane_test(ctx, *tri)
            break
    else:
        pytest.fail("no admissible triple found")


def test_tangent_plane_test_chain_triple_is_secant(ctx5):
    # chain points span secant planes
    pts = [e % ctx5.base_embed_exp for e in (0, 182, 305)]
    assert tangent_plane_test(ctx5, *pts) is False


def test_tangent_plane_test_errors():
    ctx = get_ctx(5)
    a = 1
    b = ctx.add(a, ctx.scalar(2))  # dependent with a and 1
    with pytest.raises(DependentTriple):
        tangent_plane_test(ctx, ctx.one, a, b)
    g = int(singular_points(ctx)[0])
    # find independent triple containing a quadric point
    for x in range(1, 60):
        rows = [_point_coords_codes(ctx, v) for v in (g, x, ctx.one)]
        if _rank_fq(ctx, rows) == 3:
            with pytest.raises(ZeroTraceSquare):
                tangent_plane_test(ctx, g, x, ctx.one)
            break


@pytest.mark.parametrize("q", [5, 7])
def test_tangent_plane_test_vs_plane_enumeration(q):
    ctx = get_ctx(q)
    kinds = point_kind_codes(ctx)
    rng = np.random.default_rng(q)
    E = num_points(ctx)
    checked = 0
    while checked < 200:
        tri = [int(v) for v in rng.integers(0, E, size=3)]
        if len(set(tri)) != 3 or any(kinds[t] == 0 for t in tri):
            continue
        rows = [_point_coords_codes(ctx, t) for t in tri]
        if _rank_fq(ctx, rows) != 3:
            continue
        plane = points_on_plane(ctx, *tri)
        n_sing = sum(1 for r in plane if kinds[r] == 0)
        assert tangent_plane_test(ctx, *tri) == (n_sing == 1)
        checked += 1


def test_cone_contains():
    ctx = get_ctx(5)
    kinds = point_kind_codes(ctx)
    X = canonical_point(ctx, ctx.one)
    assert cone_contains(ctx, X, X)
    with pytest.raises(VertexOnQuadric):
        cone_contains(ctx, int(singular_points(ctx)[0]), 1)
    # quadric points on the cone are exactly the polar-plane conic
    for y in singular_points(ctx):
        expect = ctx.trace_fq[int(y)] == 0  # tr(1*y) = 0
        assert cone_contains(ctx, X, int(y)) == bool(expect)
    # external point count on the cone: (q+1)(q-1) + 1 = q^2
    cone_ext = [r for r in range(num_points(ctx))
                if kinds[r] != 0 and cone_contains(ctx, X, r)]
    assert len(cone_ext) == 25


@pytest.mark.parametrize("q", [5, 7])
def test_pairwise_cone_intersection_count(q):
    # |cone(X) * cone(X')| = 2(q-1) external points for X' in the vertex set
    from bruenchains.graphs import vertex_reps

    ctx = get_ctx(q)
    kinds = point_kind_codes(ctx)
    ext = [r for r in range(num_points(ctx)) if kinds[r] != 0]
    rng = np.random.default_rng(q)
    reps = vertex_reps(ctx)
    for xp in rng.choice(reps, size=4, replace=False):
        cnt = sum(1 for r in ext
                  if cone_contains(ctx, 0, r) and cone_contains(ctx, int(xp), r))
        assert cnt == 2 * (q - 1)


def test_polar_form():
    ctx = get_ctx(5)
    f = polar_form(ctx, canonical_point(ctx, ctx.one))
    assert f(ctx.one) != ctx.zero  # X is off its own polar plane
    g = int(singular_points(ctx)[0])
    fg = polar_form(ctx, g)
    assert fg(g) == ctx.zero  # singular points lie on their polar plane
    cnt = sum(1 for r in range(num_points(ctx)) if fg(r) == ctx.zero)
    assert cnt == 5 * 5 + 5 + 1


def test_polarity_involution():
    # the common zero set of the polars of three independent points of
    # polar(P) is P again
    ctx = get_ctx(5)
    E = num_points(ctx)
    rng = np.random.default_rng(6)
    for _ in range(10):
        p = int(rng.integers(0, E))
        plane = [r for r in range(E) if ctx.trace_fq[(p + r) % ctx.n_units] == 0]
        tri = None
        for cand in itertools.combinations(plane[:12], 3):
            rows = [_point_coords_codes(ctx, t) for t in cand]
            if _rank_fq(ctx, rows) == 3:
                tri = cand
                break
        assert tri is not None
        back = [r for r in range(E)
                if all(ctx.trace_fq[(t + r) % ctx.n_units] == 0 for t in tri)]
        assert back == [p]


@pytest.mark.parametrize("q", [5, 7])
def test_cone_line_intersections_against_prediction(q):
    ctx = get_ctx(q)
    rng = np.random.default_rng(q)
    checked = 0
    while checked < 300:
        d = int(rng.integers(1, ctx.n_units))
        e = int(rng.integers(1, ctx.n_units))
        try:
            cnt, pts = cone_line_intersections(ctx, d, e)
        except (DependentTriple, ZeroTrace):
            continue
        assert cnt == refined_cone_line_prediction(ctx, d, e)
        kinds = point_kind_codes(ctx)
        for r in pts:
            assert kinds[r] != 0 and cone_contains(ctx, 0, r)
        checked += 1


def test_cone_line_intersections_reaches_all_classes():
    """Specific cases for the published case split: 0 / 1 / 2 points on a
    non-tangent plane per nonzero-square / zero / nonsquare."""
    ctx = get_ctx(5)
    kinds = point_kind_codes(ctx)
    seen = {}
    rng = np.random.default_rng(7)
    while len(seen) < 3:
        d = int(rng.integers(1, ctx.n_units))
        e = int(rng.integers(1, ctx.n_units))
        try:
            cnt, _ = cone_line_intersections(ctx, d, e)
        except (DependentTriple, ZeroTrace):
            continue
        tangent = sum(1 for r in points_on_plane(ctx, ctx.one, d, e)
                      if kinds[r] == 0) == 1
        if not tangent:
            seen.setdefault(cnt, (d, e))
    assert set(seen) == {0, 1, 2}


def test_cone_line_intersections_errors():
    ctx = get_ctx(5)
    with pytest.raises(ZeroTrace):
        # delta with zero trace: any element of the polar plane of <1>
        d = next(r for r in range(1, 200) if ctx.trace_fq[r] == 0)
        cone_line_intersections(ctx, d, 1)
    d = next(r for r in range(1, 200)
             if ctx.trace_fq[r] != 0 and not ctx.in_base_field(r))
    with pytest.raises(DependentTriple):
        cone_line_intersections(ctx, d, ctx.add(d, ctx.scalar(2)))
