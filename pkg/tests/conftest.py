import pytest

from bruenchains import field as field_mod
from bruenchains import graphs as graphs_mod
from bruenchains import symmetry as symmetry_mod

_GENS_CACHE = {}


def get_ctx(q):
    return field_mod.make_field(q)


def get_gamma(q):
    return graphs_mod.build_gamma(get_ctx(q))


def get_delta(q):
    return graphs_mod.build_delta(get_ctx(q))


def get_gens_orbits(q, kind="gamma"):
    key = (q, kind)
    if key not in _GENS_CACHE:
        ctx = get_ctx(q)
        graph = get_gamma(q) if kind == "gamma" else get_delta(q)
        gens = symmetry_mod.stabilizer_generators(ctx, graph)
        orbits = symmetry_mod.vertex_orbits(graph, gens)
        _GENS_CACHE[key] = (gens, orbits)
    return _GENS_CACHE[key]


@pytest.fixture(scope="session")
def ctx5():
    return get_ctx(5)


@pytest.fixture(scope="session")
def ctx7():
    return get_ctx(7)


@pytest.fixture(scope="session")
def ctx9():
    return get_ctx(9)


@pytest.fixture(scope="session")
def gamma5():
    return get_gamma(5)


@pytest.fixture(scope="session")
def delta5():
    return get_delta(5)
