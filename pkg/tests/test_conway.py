"""The bundled polynomial table is re-derived from the defining property."""

import pytest

from bruenchains import conway


def test_degree_one_is_smallest_primitive_root():
    # x - 2 over F_5, x - 3 over F_7, x - 2 over F_11
    assert conway.compute_conway_polynomial(5, 1) == (3, 1)
    assert conway.compute_conway_polynomial(7, 1) == (4, 1)
    assert conway.compute_conway_polynomial(11, 1) == (9, 1)


def test_degree_two_known_values():
    assert conway.compute_conway_polynomial(3, 2) == (2, 2, 1)
    assert conway.compute_conway_polynomial(5, 2) == (2, 4, 1)


def test_bundled_entries_are_primitive_and_compatible():
    table = conway.bundled_conway_table()
    assert len(table) == 18
    for (p, deg), coeffs in table.items():
        assert len(coeffs) == deg + 1 and coeffs[-1] == 1
        assert conway.is_primitive_poly(coeffs, p)
        for r in conway.prime_factors(deg):
            sub = conway.compute_conway_polynomial(p, deg // r)
            assert conway.is_norm_compatible(coeffs, sub, p), (p, deg, r)


@pytest.mark.parametrize("p,deg", [(5, 4), (7, 4), (11, 4), (13, 4), (3, 8)])
def test_recomputation_matches_bundle(p, deg):
    assert conway.compute_conway_polynomial(p, deg) == conway.lookup_conway(p, deg)


def test_fallback_primitive_search():
    f = conway.least_primitive_polynomial(59, 2)
    assert conway.is_primitive_poly(f, 59)
    assert f == conway.least_primitive_polynomial(59, 2)  # deterministic


def test_prime_factors():
    assert conway.prime_factors(624) == [2, 3, 13]
    assert conway.prime_factors(97) == [97]
