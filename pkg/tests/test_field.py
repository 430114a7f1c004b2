import numpy as np
import pytest

from oracles import PolyFieldOracle, element_word

from bruenchains import conway
from bruenchains.errors import (
    FieldTooLarge,
    NotASquare,
    NotInBaseField,
    NotOddPrimePower,
)
from bruenchains.field import (
    SquareClass,
    coords,
    from_coords,
    make_field,
    sqrt_base,
    square_class,
    trace,
)

from conftest import get_ctx


@pytest.mark.parametrize("q", [4, 6, 8, 12, 2, 3, 1])
def test_make_field_rejects_bad_q(q):
    with pytest.raises(NotOddPrimePower):
        make_field(q)


def test_make_field_large_field_guard():
    with pytest.raises(FieldTooLarge):
        make_field(59)
    with pytest.raises(FieldTooLarge):
        make_field(37, max_table_gib=0.001)


def test_basic_structure_q5():
    ctx = get_ctx(5)
    assert (ctx.p, ctx.e, ctx.q) == (5, 1, 5)
    assert ctx.is_conway
    assert ctx.n_units == 624
    assert ctx.base_embed_exp == 156
    assert ctx.modulus == conway.lookup_conway(5, 4)


def test_basic_structure_q9():
    ctx = get_ctx(9)
    assert (ctx.p, ctx.e, ctx.q) == (3, 2, 9)
    assert ctx.dim == 8
    assert ctx.is_conway


def test_primitive_element_orders_q5_against_oracle():
    ctx = get_ctx(5)
    oracle = PolyFieldOracle(5, ctx.modulus)
    assert oracle.multiplicative_order(oracle.z()) == 624
    # z^624 = 1 and z^312 = -1
    assert oracle.z_pow(624) == oracle.one()
    assert oracle.z_pow(312) == oracle.neg(oracle.one())
    assert ctx.neg(ctx.one) == 312


def test_exp_table_matches_oracle_q5():
    ctx = get_ctx(5)
    oracle = PolyFieldOracle(5, ctx.modulus)
    cur = oracle.one()
    for k in range(624):
        assert ctx.word_of(k) == element_word(oracle, cur)
        cur = oracle.mul(cur, oracle.z())


def test_multiplicativity_random_pairs():
    ctx = get_ctx(7)
    oracle = PolyFieldOracle(7, ctx.modulus)
    rng = np.random.default_rng(0)
    for _ in range(10_000):
        i = int(rng.integers(0, ctx.n_units))
        j = int(rng.integers(0, ctx.n_units))
        assert ctx.mul(i, j) == (i + j) % ctx.n_units
    # the log representation makes that trivially true; cross-check the words
    for _ in range(300):
        i = int(rng.integers(0, ctx.n_units))
        j = int(rng.integers(0, ctx.n_units))
        w = oracle.mul(oracle.z_pow(i), oracle.z_pow(j))
        assert ctx.word_of(ctx.mul(i, j)) == element_word(oracle, w)


def test_zech_addition_full_q5():
    ctx = get_ctx(5)
    oracle = PolyFieldOracle(5, ctx.modulus)
    elems = [oracle.z_pow(k) for k in range(624)] + [oracle.zero()]
    logs = list(range(624)) + [ctx.zero]
    rng = np.random.default_rng(1)
    for _ in range(4000):
        i = int(rng.integers(0, 625))
        j = int(rng.integers(0, 625))
        s = oracle.add(elems[i], elems[j])
        assert ctx.word_of(ctx.add(logs[i], logs[j])) == element_word(oracle, s)


def test_trace_values():
    ctx = get_ctx(5)
    # trace(1) = 4, a square; trace(0) = 0
    assert ctx.word_of(trace(ctx, ctx.one)) == 4
    assert trace(ctx, ctx.zero) == ctx.zero
    oracle = PolyFieldOracle(5, ctx.modulus)
    assert ctx.word_of(trace(ctx, 1)) == element_word(oracle, oracle.trace(oracle.z(), 5))


@pytest.mark.parametrize("q", [5, 7, 9])
def test_trace_against_oracle_sampled(q):
    ctx = get_ctx(q)
    oracle = PolyFieldOracle(ctx.p, ctx.modulus)
    rng = np.random.default_rng(q)
    for _ in range(60):
        k = int(rng.integers(0, ctx.n_units))
        t = oracle.trace(oracle.z_pow(k), q)
        assert ctx.word_of(trace(ctx, k)) == element_word(oracle, t)


@pytest.mark.parametrize("q", [5, 7, 9, 11])
def test_trace_linearity_and_frobenius(q):
    ctx = get_ctx(q)
    rng = np.random.default_rng(q)
    fq = [int(ctx.fq_biglog[c]) for c in range(ctx.q)]
    for _ in range(200):
        x = int(rng.integers(0, ctx.n_units))
        y = int(rng.integers(0, ctx.n_units))
        lam = fq[int(rng.integers(0, ctx.q))]
        mu = fq[int(rng.integers(0, ctx.q))]
        lhs = trace(ctx, ctx.add(ctx.mul(lam, x), ctx.mul(mu, y)))
        rhs = ctx.add(ctx.mul(lam, trace(ctx, x)), ctx.mul(mu, trace(ctx, y)))
        assert lhs == rhs
        assert trace(ctx, ctx.frobenius(x)) == trace(ctx, x)
        assert ctx.in_base_field(trace(ctx, x))


def test_square_class_values():
    ctx = get_ctx(5)
    assert square_class(ctx, ctx.scalar(4)) is SquareClass.SQUARE
    assert square_class(ctx, ctx.zero) is SquareClass.ZERO
    # squares of F_5 are {1, 4}; 2 is a nonsquare
    assert square_class(ctx, ctx.scalar(2)) is SquareClass.NONSQUARE
    with pytest.raises(NotInBaseField):
        square_class(ctx, 1)  # z itself is not in F_q


@pytest.mark.parametrize("q", [5, 7, 9, 13])
def test_square_class_counts(q):
    ctx = get_ctx(q)
    counts = {SquareClass.ZERO: 0, SquareClass.SQUARE: 0, SquareClass.NONSQUARE: 0}
    elems = [ctx.zero] + [int(ctx.fq_biglog[c]) for c in range(1, q)]
    for s in elems:
        counts[square_class(ctx, s)] += 1
    assert counts[SquareClass.ZERO] == 1
    assert counts[SquareClass.SQUARE] == (q - 1) // 2
    assert counts[SquareClass.NONSQUARE] == (q - 1) // 2


def test_sqrt_base():
    ctx = get_ctx(5)
    a = sqrt_base(ctx, ctx.scalar(4))
    assert ctx.mul(a, a) == ctx.scalar(4)
    assert sqrt_base(ctx, ctx.zero) == ctx.zero
    with pytest.raises(NotASquare):
        sqrt_base(ctx, ctx.scalar(2))
    # canonical root is exp(log(s)/2), the other root its negative
    s = ctx.scalar(4)
    assert a == s // 2
    ctx7 = get_ctx(7)
    # squares of F_7: {1,2,4}; sqrt(2) in {3,4}
    r = sqrt_base(ctx7, ctx7.scalar(2))
    assert ctx7.word_of(r) in (3, 4)
    assert ctx7.mul(r, r) == ctx7.scalar(2)


def test_coords_examples_and_roundtrip():
    ctx = get_ctx(5)
    one = ctx.one
    zero = ctx.zero
    assert coords(ctx, one) == (one, zero, zero, zero)
    assert coords(ctx, 3) == (zero, zero, zero, one)
    # z^4 = -(c0 + c1 z + c2 z^2 + c3 z^3) for the modulus c
    c = ctx.modulus
    want = tuple(ctx.neg(ctx.scalar(ci)) for ci in c[:4])
    assert coords(ctx, 4) == want
    rng = np.random.default_rng(2)
    for _ in range(500):
        x = int(rng.integers(0, ctx.n_units + 1))
        assert from_coords(ctx, coords(ctx, x)) == x


@pytest.mark.parametrize("q", [9, 25])
def test_coords_roundtrip_extension_fields(q):
    ctx = get_ctx(q)
    rng = np.random.default_rng(q)
    for _ in range(300):
        x = int(rng.integers(0, ctx.n_units + 1))
        cs = coords(ctx, x)
        assert all(ctx.in_base_field(c) for c in cs)
        assert from_coords(ctx, cs) == x


def test_conway_cross_check_appendix_exponent():
    # Q(z^182) = trace(z^364) must be a nonzero square for the first
    # nontrivial published exponent at q=5
    ctx = get_ctx(5)
    val = trace(ctx, ctx.mul(182, 182))
    assert square_class(ctx, val) is SquareClass.SQUARE


def test_base_field_embedding():
    ctx = get_ctx(9)
    E = ctx.base_embed_exp
    g = E  # log of the F_q* generator
    seen = {ctx.word_of(ctx.power(g, k)) for k in range(ctx.q - 1)}
    assert len(seen) == ctx.q - 1
    assert ctx.in_base_field(ctx.power(g, 3))
    assert not ctx.in_base_field(1)
