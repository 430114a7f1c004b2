"""Bruen chains in PG(3,q) through a finite-field model: graph construction
over F_{q^4}, symmetry-aware exact clique search, and chain verification."""

from .chains import (
    Chain,
    ChainClass,
    VerifyReport,
    chain_from_exponents,
    chain_to_clique,
    clique_to_chain,
    enumerate_chain_classes,
    load_chain,
    load_corpus,
    verify_chain,
)
from .clique import SearchConfig, SearchResult, cliques_of_size, greedy_color_bound, max_clique
from .field import FieldCtx, SquareClass, coords, from_coords, make_field, sqrt_base, square_class, trace
from .graphs import (
    Graph,
    build_delta,
    build_gamma,
    coclique_from_cone,
    cone_condition,
    fast_cone_condition,
    vertex_reps,
    vertex_set,
)
from .io_formats import ResultRow, read_dimacs, write_dimacs, write_figure_svg, write_results_csv
from .projective import (
    LineType,
    PointKind,
    ProjPoint,
    canonical_point,
    collinear,
    collinear_with_one,
    cone_contains,
    cone_line_intersections,
    line_type,
    polar_form,
    tangent_plane_test,
)
from .symmetry import OrbitPartition, VertexPerm, stabilizer_generators, vertex_orbits

__version__ = "0.1.0"
