"""Conway polynomials and primitive polynomials over prime fields.

The multiplicative labels used by the bundled chain corpus are exponents of
the standard generator of F_{q^4}, i.e. the root of the Conway polynomial of
degree 4e over F_p.  A table for every q <= 53 appearing in the result tables
ships with the package (``data/conway_polys.txt``); this module can also
recompute any entry from the defining property, which the test suite uses to
re-verify the bundled data.

Polynomials are coefficient tuples over F_p, constant term first, monic.
"""

from __future__ import annotations

import os
from functools import lru_cache
from importlib import resources

from .errors import BruenChainsError

CONWAY_ENV = "BRUENCHAINS_CONWAY_FILE"
_DATA_FILE = "conway_polys.txt"


# --- arithmetic of polynomials over F_p --------------------------------------

def poly_mulmod(a: list[int], b: list[int], f: tuple[int, ...], p: int) -> list[int]:
    """(a*b) mod f over F_p; f monic, inputs already reduced below deg f."""
    n = len(f) - 1
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    for d in range(len(res) - 1, n - 1, -1):
        c = res[d]
        if c:
            res[d] = 0
            base = d - n
            for k in range(n):
                if f[k]:
                    res[base + k] = (res[base + k] - c * f[k]) % p
    res = res[:n]
    res += [0] * (n - len(res))
    return res


def poly_powmod(a: list[int], e: int, f: tuple[int, ...], p: int) -> list[int]:
    n = len(f) - 1
    result = [1] + [0] * (n - 1)
    base = list(a) + [0] * (n - len(a))
    while e:
        if e & 1:
            result = poly_mulmod(result, base, f, p)
        base = poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def _is_one(a: list[int]) -> bool:
    return a[0] == 1 and not any(a[1:])


def prime_factors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def is_primitive_poly(coeffs: tuple[int, ...], p: int) -> bool:
    """True iff the monic polynomial is primitive over F_p.

    Ord(x) = p^n - 1 in F_p[x]/(f) forces f irreducible, so a single order
    test suffices.
    """
    n = len(coeffs) - 1
    if coeffs[0] % p == 0:
        return False
    m = p**n - 1
    x = [0, 1] if n > 1 else [(-coeffs[0]) % p]
    if n == 1:
        return _order_is(x[0], m, p)
    if not _is_one(poly_powmod(x, m, coeffs, p)):
        return False
    for r in prime_factors(m):
        if _is_one(poly_powmod(x, m // r, coeffs, p)):
            return False
    return True


def _order_is(g: int, m: int, p: int) -> bool:
    if g % p == 0:
        return False
    if pow(g, m, p) != 1:
        return False
    return all(pow(g, m // r, p) != 1 for r in prime_factors(m))


@lru_cache(maxsize=None)
def smallest_primitive_root(p: int) -> int:
    for g in range(2, p):
        if _order_is(g, p - 1, p):
            return g
    return 1  # p == 2 or p == 3 handled by the loop; p=2 -> 1


def is_norm_compatible(coeffs: tuple[int, ...], sub: tuple[int, ...], p: int) -> bool:
    """sub(x^((p^n-1)/(p^m-1))) == 0 mod coeffs, the subfield condition."""
    n = len(coeffs) - 1
    m = len(sub) - 1
    e = (p**n - 1) // (p**m - 1)
    y = poly_powmod([0, 1], e, coeffs, p)
    acc = [0] * n
    for c in reversed(sub):
        acc = poly_mulmod(acc, y, coeffs, p)
        acc[0] = (acc[0] + c) % p
    return not any(acc)


# --- the Conway polynomial ----------------------------------------------------

def _candidate_words(p: int, n: int):
    """Words (w_{n-1}, ..., w_1) in the standard ascending order."""
    total = p ** (n - 1)
    for c in range(total):
        digits = []
        for _ in range(n - 1):
            digits.append(c % p)
            c //= p
        # digits[k-1] corresponds to w_k; c's low digit varies fastest, so
        # yield with w_{n-1} as the most significant position.
        yield tuple(reversed(digits))


def _word_to_coeffs(word: tuple[int, ...], a0: int, n: int, p: int) -> tuple[int, ...]:
    # word = (w_{n-1}, ..., w_1); coefficient of x^k is (-1)^(n-k) w_k.
    coeffs = [0] * (n + 1)
    coeffs[0] = a0
    coeffs[n] = 1
    for idx, w in enumerate(word):
        k = n - 1 - idx
        coeffs[k] = (w if (n - k) % 2 == 0 else (-w) % p)
    return tuple(coeffs)


@lru_cache(maxsize=None)
def compute_conway_polynomial(p: int, n: int) -> tuple[int, ...]:
    """Conway polynomial of degree n over F_p, from the defining property.

    Smallest monic primitive polynomial, in the standard word ordering, that
    is norm-compatible with the Conway polynomials of all proper subfields.
    """
    g = smallest_primitive_root(p)
    if n == 1:
        return ((-g) % p, 1)
    subs = [compute_conway_polynomial(p, n // r) for r in prime_factors(n)]
    # Norm compatibility with the prime field pins the constant term.
    a0 = (g if n % 2 == 0 else (-g) % p)
    for word in _candidate_words(p, n):
        coeffs = _word_to_coeffs(word, a0, n, p)
        if not is_primitive_poly(coeffs, p):
            continue
        if all(is_norm_compatible(coeffs, s, p) for s in subs):
            return coeffs
    raise BruenChainsError(f"no Conway polynomial found for p={p}, n={n}")


def least_primitive_polynomial(p: int, n: int) -> tuple[int, ...]:
    """Deterministic fallback: smallest monic primitive polynomial of degree n
    over F_p under plain lexicographic order on (a_{n-1}, ..., a_0)."""
    for c in range(1, p**n):
        digits = []
        for _ in range(n):
            digits.append(c % p)
            c //= p
        coeffs = tuple(digits) + (1,)
        if is_primitive_poly(coeffs, p):
            return coeffs
    raise BruenChainsError(f"no primitive polynomial of degree {n} over F_{p}")


# --- bundled table -------------------------------------------------------------

def _parse_table(text: str) -> dict[tuple[int, int], tuple[int, ...]]:
    table: dict[tuple[int, int], tuple[int, ...]] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        p, deg = int(parts[0]), int(parts[1])
        coeffs = tuple(int(t) for t in parts[2:])
        if len(coeffs) != deg + 1:
            raise BruenChainsError(f"conway table: bad record for p={p} deg={deg}")
        table[(p, deg)] = coeffs
    return table


@lru_cache(maxsize=None)
def bundled_conway_table() -> dict[tuple[int, int], tuple[int, ...]]:
    override = os.environ.get(CONWAY_ENV)
    if override:
        with open(override, "r", encoding="ascii") as fh:
            return _parse_table(fh.read())
    text = (resources.files("bruenchains") / "data" / _DATA_FILE).read_text("ascii")
    return _parse_table(text)


def lookup_conway(p: int, deg: int) -> tuple[int, ...] | None:
    return bundled_conway_table().get((p, deg))


def format_table(table: dict[tuple[int, int], tuple[int, ...]]) -> str:
    lines = ["# Conway polynomials over F_p, degree 4e; coefficients constant term first."]
    for (p, deg) in sorted(table):
        coeffs = table[(p, deg)]
        lines.append(f"{p} {deg} " + " ".join(str(c) for c in coeffs))
    return "\n".join(lines) + "\n"
