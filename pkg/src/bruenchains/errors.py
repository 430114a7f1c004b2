"""Exception types shared across the package.

Every predicate rejects bad input with a specific error instead of guessing;
a silently misclassified pair would corrupt graph adjacency downstream.
"""


class BruenChainsError(Exception):
    """Base class for all package errors."""


# --- field construction -----------------------------------------------------

class NotOddPrimePower(BruenChainsError):
    """q is not an odd prime power >= 5."""


class FieldTooLarge(BruenChainsError):
    """Log/Zech tables for F_{q^4} would exceed the memory budget."""


class NotInBaseField(BruenChainsError):
    """Element expected in the embedded F_q is not."""


class NotASquare(BruenChainsError):
    """Square root requested of a nonsquare of F_q."""


# --- projective geometry ----------------------------------------------------

class ZeroVector(BruenChainsError):
    """The zero element of F_{q^4} defines no projective point."""


class SamePoint(BruenChainsError):
    """Two distinct points are required."""


class InBaseField(BruenChainsError):
    """Element lies in F_q, i.e. represents the point <1>."""


class DuplicatePoint(BruenChainsError):
    """Pairwise distinct points are required."""


class DependentTriple(BruenChainsError):
    """The given elements are F_q-linearly dependent."""


class ZeroTraceSquare(BruenChainsError):
    """tr(x^2) = 0 for one of the inputs; the closed form does not apply."""


class VertexOnQuadric(BruenChainsError):
    """Cone vertex must be an external point."""


class ZeroTrace(BruenChainsError):
    """tr(x) = 0 for one of the inputs; the line would pass through <1>."""


class PointOnQuadric(BruenChainsError):
    """A chain point lies on the elliptic quadric."""


# --- graphs / symmetry / cliques -------------------------------------------

class DependentWithOne(BruenChainsError):
    """{1, alpha, beta} is F_q-linearly dependent (pair collinear with <1>)."""


class NotOnTangentLine(BruenChainsError):
    """The point does not lie on a tangent line through <1>."""


class NotAClique(BruenChainsError):
    """Vertex set fails the pairwise adjacency check."""


# --- chains -----------------------------------------------------------------

class WrongSize(BruenChainsError):
    """Chain or clique has the wrong number of points."""


class XNotInChain(BruenChainsError):
    """chain_to_clique needs <1> among the chain points."""


class VertexNotInGraph(BruenChainsError):
    """A chain point has no vertex in the graph (even/odd class mismatch)."""


class ModulusMismatch(BruenChainsError):
    """Chain exponents were recorded under a different modulus polynomial."""


class MalformedLine(BruenChainsError):
    """Chain file line does not match the documented format."""


class ExponentOutOfRange(BruenChainsError):
    """Chain exponent is negative."""


# --- io ----------------------------------------------------------------------

class MalformedHeader(BruenChainsError):
    """DIMACS file lacks a valid 'p edge n m' header."""


class EdgeIndexOutOfRange(BruenChainsError):
    """DIMACS edge endpoint outside 1..n."""


class EmptyRows(BruenChainsError):
    """Result writers need at least one row."""
