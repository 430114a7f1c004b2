"""Independent brute-force oracles used by the tests.

Everything here recomputes results from first principles (naive polynomial
arithmetic, exhaustive enumeration) without touching the package's table
machinery, so agreement is meaningful.
"""

from __future__ import annotations

import itertools


class PolyFieldOracle:
    """F_{p^n} as F_p[x]/(f) with naive list arithmetic; elements are
    coefficient tuples, constant term first."""

    def __init__(self, p: int, modulus: tuple[int, ...]):
        self.p = p
        self.n = len(modulus) - 1
        self.modulus = modulus
        assert modulus[-1] == 1

    def zero(self):
        return (0,) * self.n

    def one(self):
        return (1,) + (0,) * (self.n - 1)

    def z(self):
        return tuple(1 if i == 1 else 0 for i in range(self.n))

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def scalar_mul(self, c, a):
        return tuple((c * x) % self.p for x in a)

    def mul(self, a, b):
        res = [0] * (2 * self.n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    res[i + j] = (res[i + j] + ai * bj) % self.p
        for d in range(len(res) - 1, self.n - 1, -1):
            c = res[d]
            if c:
                res[d] = 0
                for k in range(self.n):
                    res[d - self.n + k] = (res[d - self.n + k] - c * self.modulus[k]) % self.p
        return tuple(res[: self.n])

    def pow(self, a, e: int):
        result = self.one()
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def z_pow(self, k: int):
        return self.pow(self.z(), k)

    def trace(self, a, q: int):
        """a + a^q + a^{q^2} + a^{q^3}."""
        acc = self.zero()
        cur = a
        for _ in range(4):
            acc = self.add(acc, cur)
            cur = self.pow(cur, q)
        return acc

    def multiplicative_order(self, a):
        assert a != self.zero()
        cur = a
        k = 1
        while cur != self.one():
            cur = self.mul(cur, a)
            k += 1
        return k


def element_word(oracle: PolyFieldOracle, a) -> int:
    w = 0
    for c in reversed(a):
        w = w * oracle.p + c
    return w


def base_field_squares(q: int, p: int, e: int) -> set[int]:
    """Squares of F_q as integers, only meaningful for prime q (e == 1)."""
    assert e == 1
    return {(x * x) % p for x in range(1, p)}


def brute_force_max_clique(adj_sets: list[set[int]]) -> int:
    """Exact omega by recursive enumeration; fine for <= 25 vertices."""
    n = len(adj_sets)
    best = 0

    def extend(clique_size: int, cands: set[int]):
        nonlocal best
        if clique_size > best:
            best = clique_size
        for v in sorted(cands):
            rest = cands & adj_sets[v] & {u for u in cands if u > v}
            if clique_size + 1 + len(rest) > best:
                extend(clique_size + 1, rest)

    extend(0, set(range(n)))
    return best


def all_subsets_clique_number(adj, n: int) -> int:
    best = 1 if n else 0
    for size in range(2, n + 1):
        found = False
        for sub in itertools.combinations(range(n), size):
            if all(adj(u, v) for u, v in itertools.combinations(sub, 2)):
                found = True
                break
        if found:
            best = size
        else:
            break
    return best
