"""Exact arithmetic in F_q and F_{q^4} for odd prime powers q.

Elements of F_{q^4} are represented as discrete logarithms of the primitive
element z (the residue class of x modulo the defining polynomial): an element
is an integer in [0, q^4-2], with ``ctx.zero`` (= q^4-1) as the sentinel for
the zero element.  Products and inverses are index arithmetic; additions go
through a Zech-logarithm table.  The relative trace down to F_q is
precomputed for every element, since the graph builders evaluate millions of
trace and square-class tests.

The embedded base field F_q is the cyclic group generated by g = z^E with
E = (q^4-1)/(q-1), plus zero.  Internally base-field values are also handled
as small "codes" (0 for zero, 1+j for g^j) with dense q x q operation tables;
the public API sticks to the log representation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import conway
from .errors import (
    FieldTooLarge,
    NotASquare,
    NotInBaseField,
    NotOddPrimePower,
)

_GIB = 1024**3
DEFAULT_TABLE_BUDGET_GIB = 2.0
LARGE_FIELD_THRESHOLD = 53

_CTX_CACHE: dict[int, "FieldCtx"] = {}


class SquareClass(enum.Enum):
    """Class of an element of F_q under squaring."""

    ZERO = 0
    SQUARE = 1
    NONSQUARE = 2


def _factor_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise NotOddPrimePower(f"q={q} is not an odd prime power >= 5")
    p = None
    for d in range(2, q + 1):
        if q % d == 0:
            p = d
            break
    m, e = q, 0
    while m % p == 0:
        m //= p
        e += 1
    if m != 1:
        raise NotOddPrimePower(f"q={q} is not a prime power")
    if p == 2:
        raise NotOddPrimePower(f"q={q} is even; the model needs odd q")
    if q < 5:
        raise NotOddPrimePower(f"q={q} is below the smallest supported case q=5")
    return p, e


@dataclass(frozen=True)
class FieldCtx:
    """Immutable arithmetic context for F_{q^4} over F_q.

    Safe to share across threads: every table is written once during
    construction and only read afterwards.
    """

    p: int
    e: int
    q: int
    modulus: tuple[int, ...]  # degree 4e over F_p, constant term first
    is_conway: bool
    dim: int                  # 4e
    n_units: int              # q^4 - 1
    base_embed_exp: int       # E = (q^4-1)/(q-1); z^E generates F_q*
    half: int                 # log of -1
    exp_words: np.ndarray = dc_field(repr=False)
    log_table: np.ndarray = dc_field(repr=False)
    zech: np.ndarray = dc_field(repr=False)
    trace_fq: np.ndarray = dc_field(repr=False)   # log -> F_q code of trace
    fq_add: np.ndarray = dc_field(repr=False)
    fq_mul: np.ndarray = dc_field(repr=False)
    fq_neg: np.ndarray = dc_field(repr=False)
    fq_inv: np.ndarray = dc_field(repr=False)
    fq_sqrt: np.ndarray = dc_field(repr=False)    # -1 where no root exists
    fq_is_square: np.ndarray = dc_field(repr=False)  # True on nonzero squares
    fq_biglog: np.ndarray = dc_field(repr=False)  # code -> log
    fq_word: np.ndarray = dc_field(repr=False)
    int_code: np.ndarray = dc_field(repr=False)   # 0..p-1 -> F_q code
    coord_rows: np.ndarray = dc_field(repr=False)  # dual-basis matrix, codes

    # --- basic element arithmetic (log representation) ----------------------

    @property
    def zero(self) -> int:
        return self.n_units

    @property
    def one(self) -> int:
        return 0

    def mul(self, x: int, y: int) -> int:
        if x == self.n_units or y == self.n_units:
            return self.n_units
        return (x + y) % self.n_units

    def inv(self, x: int) -> int:
        if x == self.n_units:
            raise ZeroDivisionError("inverse of zero in F_{q^4}")
        return (-x) % self.n_units

    def neg(self, x: int) -> int:
        if x == self.n_units:
            return x
        return (x + self.half) % self.n_units

    def add(self, x: int, y: int) -> int:
        if x == self.n_units:
            return y
        if y == self.n_units:
            return x
        t = int(self.zech[(y - x) % self.n_units])
        if t == self.n_units:
            return self.n_units
        return (x + t) % self.n_units

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def power(self, x: int, k: int) -> int:
        if x == self.n_units:
            return 0 if k == 0 else self.n_units
        return (x * k) % self.n_units

    def frobenius(self, x: int) -> int:
        """x -> x^q, the F_q-linear field automorphism."""
        if x == self.n_units:
            return x
        return (x * self.q) % self.n_units

    def scalar(self, c: int) -> int:
        """Log of the prime-field constant c (an integer mod p)."""
        return int(self.log_table[c % self.p])

    def in_base_field(self, x: int) -> bool:
        return x == self.n_units or x % self.base_embed_exp == 0

    # --- base-field codes (internal fast path) ------------------------------

    def code_of(self, s: int) -> int:
        """F_q code of a log-represented base-field element."""
        if s == self.n_units:
            return 0
        if s % self.base_embed_exp:
            raise NotInBaseField(f"log {s} is not a multiple of E={self.base_embed_exp}")
        return 1 + s // self.base_embed_exp

    def word_of(self, x: int) -> int:
        return int(self.exp_words[x])

    def digits_of(self, x: int) -> tuple[int, ...]:
        w = self.word_of(x)
        out = []
        for _ in range(self.dim):
            out.append(w % self.p)
            w //= self.p
        return tuple(out)

    def element_from_digits(self, digits) -> int:
        w = 0
        for d in reversed(list(digits)):
            w = w * self.p + (int(d) % self.p)
        return int(self.log_table[w])

    def table_bytes(self) -> int:
        arrays = (self.exp_words, self.log_table, self.zech, self.trace_fq)
        return sum(a.nbytes for a in arrays)


# --- construction -------------------------------------------------------------


def estimate_table_bytes(q: int, e: int) -> int:
    # exp/log/zech int64, trace int16, transient digit matrix and words
    return (8 + 8 + 8 + 2 + 4 * e + 8) * q**4


def make_field(q: int, *, max_table_gib: float = DEFAULT_TABLE_BUDGET_GIB,
               force_large_field: bool = False) -> FieldCtx:
    """Build the arithmetic context for F_{q^4}/F_q.

    Uses the bundled Conway polynomial when available, so discrete-log labels
    agree with the published chain data; otherwise falls back to the least
    primitive polynomial and flags the context (``is_conway=False``).
    """
    p, e = _factor_prime_power(q)
    if q > LARGE_FIELD_THRESHOLD and not force_large_field:
        raise FieldTooLarge(
            f"q={q} > {LARGE_FIELD_THRESHOLD}: pass force_large_field=True "
            f"(tables need ~{estimate_table_bytes(q, e) / _GIB:.2f} GiB)")
    if not force_large_field and estimate_table_bytes(q, e) > max_table_gib * _GIB:
        raise FieldTooLarge(
            f"q={q}: estimated {estimate_table_bytes(q, e) / _GIB:.2f} GiB of tables "
            f"exceeds the {max_table_gib} GiB budget")

    cached = _CTX_CACHE.get(q)
    if cached is not None:
        return cached

    ctx = _build_ctx(p, e, q)
    _CTX_CACHE[q] = ctx
    return ctx


def clear_field_cache() -> None:
    _CTX_CACHE.clear()


def _build_ctx(p: int, e: int, q: int) -> FieldCtx:
    dim = 4 * e
    N = q**4 - 1
    E = N // (q - 1)
    half = N // 2

    coeffs = conway.lookup_conway(p, dim)
    is_conway = coeffs is not None
    if coeffs is None:
        coeffs = conway.least_primitive_polynomial(p, dim)

    digits = _exp_digit_matrix(p, dim, N, coeffs)

    p_pows = (p ** np.arange(dim)).astype(np.int64)
    exp_words = np.empty(N + 1, dtype=np.int64)
    chunk = 1 << 20
    for lo in range(0, N, chunk):
        hi = min(lo + chunk, N)
        exp_words[lo:hi] = digits[lo:hi].astype(np.int64) @ p_pows
    exp_words[N] = 0

    log_table = np.full(p**dim, N, dtype=np.int64)
    log_table[exp_words[:N]] = np.arange(N, dtype=np.int64)
    if int((log_table != N).sum()) != N:
        raise AssertionError("defining polynomial is not primitive")

    # Zech logarithms: zech[k] = log(1 + z^k); adding one only touches the
    # constant digit.  At k = half the sum is zero and the sentinel N appears
    # automatically via log_table[0].
    zech = np.empty(N + 1, dtype=np.int64)
    for lo in range(0, N, chunk):
        hi = min(lo + chunk, N)
        w = exp_words[lo:hi]
        d0 = w % p
        zech[lo:hi] = log_table[w - d0 + (d0 + 1) % p]
    zech[N] = 0

    trace_fq = _trace_table(p, q, dim, N, E, digits, p_pows, log_table)

    fq = _base_field_tables(p, q, dim, N, E, digits, exp_words)
    del digits

    coord_rows = _dual_basis_rows(q, trace_fq, fq)

    return FieldCtx(
        p=p, e=e, q=q, modulus=tuple(coeffs), is_conway=is_conway,
        dim=dim, n_units=N, base_embed_exp=E, half=half,
        exp_words=exp_words, log_table=log_table, zech=zech, trace_fq=trace_fq,
        fq_add=fq["add"], fq_mul=fq["mul"], fq_neg=fq["neg"], fq_inv=fq["inv"],
        fq_sqrt=fq["sqrt"], fq_is_square=fq["is_square"],
        fq_biglog=fq["biglog"], fq_word=fq["word"], int_code=fq["int_code"],
        coord_rows=coord_rows,
    )


def _exp_digit_matrix(p: int, dim: int, N: int, coeffs) -> np.ndarray:
    """Digit vectors of z^0 .. z^{N-1}, built blockwise.

    Multiplication by the fixed element z^B is an F_p-linear map on digit
    vectors, so each block is one small integer matmul.
    """
    digits = np.empty((N, dim), dtype=np.int8)
    block = 4096
    cur = [1] + [0] * (dim - 1)
    seed = min(block, N)
    for k in range(seed):
        digits[k] = cur
        cur = conway.poly_mulmod(cur, [0, 1], tuple(coeffs), p)
    if seed == N:
        return digits
    # cur now holds z^block; build its multiplication matrix
    matw = np.empty((dim, dim), dtype=np.int32)
    xi = [1] + [0] * (dim - 1)
    for i in range(dim):
        matw[i] = conway.poly_mulmod(cur, xi, tuple(coeffs), p)
        xi = conway.poly_mulmod(xi, [0, 1], tuple(coeffs), p)
    lo = 0
    while lo + block < N:
        hi = min(lo + 2 * block, N)
        prev = digits[lo:lo + block].astype(np.int32)
        nxt = (prev[: hi - lo - block] @ matw) % p
        digits[lo + block:hi] = nxt.astype(np.int8)
        lo += block
    return digits


def _trace_table(p, q, dim, N, E, digits, p_pows, log_table) -> np.ndarray:
    trace_fq = np.empty(N + 1, dtype=np.int16)
    chunk = 1 << 20
    for lo in range(0, N, chunk):
        hi = min(lo + chunk, N)
        idx = np.arange(lo, hi, dtype=np.int64)
        acc = digits[idx].astype(np.int16)
        for _ in range(3):
            idx = (idx * q) % N
            acc += digits[idx]
        acc %= p
        words = acc.astype(np.int64) @ p_pows
        logs = log_table[words]
        codes = np.where(words == 0, 0, 1 + logs // E)
        if np.any((logs != N) & (logs % E != 0)):
            raise AssertionError("trace left the base field")
        trace_fq[lo:hi] = codes.astype(np.int16)
    trace_fq[N] = 0
    return trace_fq


def _base_field_tables(p, q, dim, N, E, digits, exp_words) -> dict:
    biglog = np.empty(q, dtype=np.int64)
    biglog[0] = N
    biglog[1:] = E * np.arange(q - 1, dtype=np.int64)
    word = exp_words[biglog]
    code_of_word = {0: 0}
    for c in range(1, q):
        code_of_word[int(word[c])] = c

    fq_digits = np.zeros((q, dim), dtype=np.int16)
    fq_digits[1:] = digits[biglog[1:]]
    sums = (fq_digits[:, None, :] + fq_digits[None, :, :]) % p
    p_pows = (p ** np.arange(dim)).astype(np.int64)
    sum_words = sums.astype(np.int64) @ p_pows
    add = np.empty((q, q), dtype=np.int16)
    for i in range(q):
        for j in range(q):
            add[i, j] = code_of_word[int(sum_words[i, j])]

    mul = np.zeros((q, q), dtype=np.int16)
    jj = np.arange(q - 1)
    mul[1:, 1:] = 1 + (jj[:, None] + jj[None, :]) % (q - 1)

    neg = np.zeros(q, dtype=np.int16)
    neg[1:] = 1 + (jj + (q - 1) // 2) % (q - 1)
    inv = np.zeros(q, dtype=np.int16)
    inv[1:] = 1 + (-jj) % (q - 1)
    sqrt = np.full(q, -1, dtype=np.int16)
    sqrt[0] = 0
    even = jj[jj % 2 == 0]
    sqrt[1 + even] = 1 + even // 2
    is_square = np.zeros(q, dtype=bool)
    is_square[1 + even] = True

    int_code = np.empty(p, dtype=np.int16)
    for c in range(p):
        int_code[c] = code_of_word[c]

    return {"add": add, "mul": mul, "neg": neg, "inv": inv, "sqrt": sqrt,
            "is_square": is_square, "biglog": biglog, "word": word,
            "int_code": int_code}


def _dual_basis_rows(q, trace_fq, fq) -> np.ndarray:
    """Inverse Gram matrix of the basis {1, z, z^2, z^3} over F_q, as codes.

    Row i gives the dual functional: coord_i(x) = sum_j Ginv[i,j] tr(z^j x).
    """
    add, mul, inv_ = fq["add"], fq["mul"], fq["inv"]
    neg = fq["neg"]
    g = [[int(trace_fq[i + j]) for j in range(4)] for i in range(4)]
    ident = [[int(fq["int_code"][1]) if i == j else 0 for j in range(4)] for i in range(4)]
    for col in range(4):
        piv = next(r for r in range(col, 4) if g[r][col] != 0)
        g[col], g[piv] = g[piv], g[col]
        ident[col], ident[piv] = ident[piv], ident[col]
        s = int(inv_[g[col][col]])
        g[col] = [int(mul[s, v]) for v in g[col]]
        ident[col] = [int(mul[s, v]) for v in ident[col]]
        for r in range(4):
            if r != col and g[r][col] != 0:
                f = g[r][col]
                g[r] = [int(add[g[r][j], int(neg[mul[f, g[col][j]]])]) for j in range(4)]
                ident[r] = [int(add[ident[r][j], int(neg[mul[f, ident[col][j]]])])
                            for j in range(4)]
    return np.array(ident, dtype=np.int16)


# --- public operations ---------------------------------------------------------


def trace(ctx: FieldCtx, x: int) -> int:
    """Relative trace x + x^q + x^{q^2} + x^{q^3}, an element of F_q."""
    return int(ctx.fq_biglog[ctx.trace_fq[x]])


def square_class(ctx: FieldCtx, s: int) -> SquareClass:
    """Zero / nonzero square / nonsquare classification within F_q."""
    if s == ctx.n_units:
        return SquareClass.ZERO
    if s % ctx.base_embed_exp:
        raise NotInBaseField(f"element with log {s} lies outside F_{ctx.q}")
    j = s // ctx.base_embed_exp
    return SquareClass.SQUARE if j % 2 == 0 else SquareClass.NONSQUARE


def sqrt_base(ctx: FieldCtx, s: int) -> int:
    """Canonical square root exp(log(s)/2) of a square s in F_q; the other
    root is its negative."""
    cls = square_class(ctx, s)
    if cls is SquareClass.ZERO:
        return ctx.zero
    if cls is SquareClass.NONSQUARE:
        raise NotASquare(f"element with log {s} is a nonsquare in F_{ctx.q}")
    return s // 2


def coords(ctx: FieldCtx, x: int) -> tuple[int, int, int, int]:
    """Coordinates of x over F_q with respect to the basis {1, z, z^2, z^3}."""
    if x == ctx.n_units:
        z = ctx.zero
        return (z, z, z, z)
    t = [int(ctx.trace_fq[(x + j) % ctx.n_units]) for j in range(4)]
    out = []
    for i in range(4):
        acc = 0
        for j in range(4):
            acc = int(ctx.fq_add[acc, ctx.fq_mul[ctx.coord_rows[i, j], t[j]]])
        out.append(int(ctx.fq_biglog[acc]))
    return tuple(out)


def from_coords(ctx: FieldCtx, cs) -> int:
    """Inverse of :func:`coords`."""
    x = ctx.zero
    for j, c in enumerate(cs):
        if not ctx.in_base_field(c):
            raise NotInBaseField(f"coordinate {j} with log {c} is not in F_q")
        x = ctx.add(x, ctx.mul(c, j))
    return x
