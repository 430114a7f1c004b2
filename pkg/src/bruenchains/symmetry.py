"""Graph automorphisms fixing X = <1>, vertex orbits, and starter sets.

Reflections r_v(x) = x - (2 tr(vx)/tr(v^2)) v with tr(v) = 0 and tr(v^2) != 0
are isometries of the quadratic form fixing the vector 1, so they permute the
vertex set; together with the F_q-linear automorphism x -> x^q they generate
a subgroup of the stabilizer of X.  Orbit-representative starter sets from
any subgroup keep the clique search exact: an automorphism maps any clique
through a vertex to a clique through its representative.

Every emitted permutation passes a full adjacency-preservation check; a
failure would mean corrupted adjacency, not a bad generator, so it raises.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BruenChainsError
from .field import FieldCtx, SquareClass, sqrt_base, square_class
from .graphs import Graph

DEFAULT_STABLE_WINDOW = 20


@dataclass(frozen=True)
class VertexPerm:
    """A graph automorphism as a permutation of vertex indices."""

    perm: np.ndarray
    source: str


@dataclass(frozen=True)
class OrbitPartition:
    orbit_id: np.ndarray
    reps: np.ndarray

    @property
    def n_orbits(self) -> int:
        return len(self.reps)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.count = n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx
            self.count -= 1


def _point_index(graph: Graph, ctx: FieldCtx) -> np.ndarray:
    idx = np.full(ctx.base_embed_exp, -1, dtype=np.int64)
    idx[graph.labels] = np.arange(graph.n)
    return idx


def verify_automorphism(graph: Graph, perm: np.ndarray) -> bool:
    """Full adjacency-preservation check: u~w iff perm(u)~perm(w)."""
    n = graph.n
    if sorted(perm.tolist()) != list(range(n)):
        return False
    chunk = max(1, (1 << 23) // max(n, 1))
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        a = np.unpackbits(graph.adj_words[lo:hi].view(np.uint8),
                          axis=1, bitorder="little")[:, :n]
        b = np.unpackbits(graph.adj_words[perm[lo:hi]].view(np.uint8),
                          axis=1, bitorder="little")[:, :n]
        if not np.array_equal(a, b[:, perm]):
            return False
    return True


def _vectorized_sub(ctx: FieldCtx, x: np.ndarray, s: np.ndarray,
                    s_zero: np.ndarray) -> np.ndarray:
    """x - s elementwise on log arrays; s_zero marks entries with s = 0."""
    N = ctx.n_units
    negs = (s + ctx.half) % N
    t = ctx.zech[(negs - x) % N]
    if np.any(t[~s_zero] == N):
        raise AssertionError("reflection image hit zero")
    out = (x + t) % N
    return np.where(s_zero, x, out)


def _reflection_vertex_images(ctx: FieldCtx, labels: np.ndarray, v: int) -> np.ndarray:
    """Canonical reps of r_v(<y>) for every vertex label y."""
    N = ctx.n_units
    tv2 = int(ctx.trace_fq[(2 * v) % N])
    coeff = int(ctx.fq_mul[ctx.fq_mul[int(ctx.int_code[2 % ctx.p]),
                                      ctx.fq_inv[tv2]], 1])
    # code of 2/tr(v^2); multiplying by code 1 (the unit) keeps dtype small
    tvx = ctx.trace_fq[(v + labels) % N]
    cc = ctx.fq_mul[coeff, tvx]
    s_zero = cc == 0
    s = (ctx.fq_biglog[cc] + v) % N
    img = _vectorized_sub(ctx, labels, s, s_zero)
    return img % ctx.base_embed_exp


def frobenius_perm(ctx: FieldCtx, graph: Graph) -> VertexPerm | None:
    idx = _point_index(graph, ctx)
    img = ((graph.labels * ctx.q) % ctx.n_units) % ctx.base_embed_exp
    perm = idx[img]
    if np.any(perm < 0):
        raise BruenChainsError("Frobenius does not stabilize the vertex set")
    perm = perm.astype(np.int64)
    if np.array_equal(perm, np.arange(graph.n)):
        return None
    return VertexPerm(perm=perm, source="frobenius x -> x^q")


def reflection_perm(ctx: FieldCtx, graph: Graph, v: int,
                    idx: np.ndarray | None = None) -> VertexPerm | None:
    """Vertex permutation of the reflection in v (needs tr(v)=0, tr(v^2)!=0)."""
    if idx is None:
        idx = _point_index(graph, ctx)
    img = _reflection_vertex_images(ctx, graph.labels, v)
    perm = idx[img]
    if np.any(perm < 0):
        raise BruenChainsError("reflection does not stabilize the vertex set")
    perm = perm.astype(np.int64)
    if np.array_equal(perm, np.arange(graph.n)):
        return None
    return VertexPerm(perm=perm, source=f"reflection in <z^{v}>")


def stabilizer_generators(ctx: FieldCtx, graph: Graph, *,
                          max_scan: int | None = None,
                          stable_window: int = DEFAULT_STABLE_WINDOW,
                          ) -> list[VertexPerm]:
    """Deterministic list of verified automorphisms: Frobenius plus
    reflections r_v, v = z^k - (tr(z^k)/4), scanned over k until the induced
    orbit partition is stable for ``stable_window`` consecutive additions."""
    gens: list[VertexPerm] = []
    uf = _UnionFind(graph.n)
    idx = _point_index(graph, ctx)
    seen_vectors: set[int] = set()
    seen_perms: set[bytes] = set()

    def accept(cand: VertexPerm | None) -> bool:
        if cand is None:
            return False
        key = cand.perm.tobytes()
        if key in seen_perms:
            return False
        if not verify_automorphism(graph, cand.perm):
            raise BruenChainsError(f"{cand.source} failed adjacency preservation")
        seen_perms.add(key)
        gens.append(cand)
        for i, j in enumerate(cand.perm):
            uf.union(i, int(j))
        return True

    accept(frobenius_perm(ctx, graph))

    inv4 = ctx.inv(ctx.scalar(4))
    stable = 0
    last_count = uf.count
    k = 0
    scans = 0
    while stable < stable_window:
        k += 1
        scans += 1
        if max_scan is not None and scans > max_scan:
            break
        if k % ctx.base_embed_exp == 0:
            continue  # z^k in F_q: projection is zero
        tv = int(ctx.fq_biglog[ctx.trace_fq[k % ctx.n_units]])
        v = ctx.sub(k % ctx.n_units, ctx.mul(tv, inv4))
        if v == ctx.zero:
            continue
        if int(ctx.trace_fq[(2 * v) % ctx.n_units]) == 0:
            continue  # isotropic vector: no reflection
        vcan = v % ctx.base_embed_exp
        if vcan in seen_vectors:
            continue
        seen_vectors.add(vcan)
        if accept(reflection_perm(ctx, graph, v, idx)):
            if uf.count == last_count:
                stable += 1
            else:
                stable = 0
                last_count = uf.count
    return gens


def vertex_orbits(graph: Graph, gens: list[VertexPerm]) -> OrbitPartition:
    """Union-find closure over all generator images; reps are the minimal
    vertex index of each orbit."""
    uf = _UnionFind(graph.n)
    for g in gens:
        for i, j in enumerate(g.perm):
            uf.union(i, int(j))
    roots = np.array([uf.find(i) for i in range(graph.n)], dtype=np.int64)
    reps = np.unique(roots)
    remap = {int(r): k for k, r in enumerate(reps)}
    orbit_id = np.array([remap[int(r)] for r in roots], dtype=np.int32)
    return OrbitPartition(orbit_id=orbit_id, reps=reps)


# --- point-level reflections (used for chain transport) ---------------------------


def apply_reflection_point(ctx: FieldCtx, v: int, x: int) -> int:
    """Canonical rep of r_v(<x>)."""
    N = ctx.n_units
    tv2 = int(ctx.trace_fq[(2 * v) % N])
    if tv2 == 0:
        raise BruenChainsError("reflection vector must be anisotropic")
    tvx = int(ctx.trace_fq[(v + x) % N])
    cc = int(ctx.fq_mul[ctx.fq_mul[int(ctx.int_code[2 % ctx.p]), ctx.fq_inv[tv2]], tvx])
    if cc == 0:
        return x % ctx.base_embed_exp
    img = ctx.sub(x, ctx.mul(int(ctx.fq_biglog[cc]), v))
    if img == ctx.zero:
        raise AssertionError("reflection image hit zero")
    return img % ctx.base_embed_exp


def transport_reflection(ctx: FieldCtx, p: int) -> int | None:
    """A reflection vector v with r_v(<p>) = <1>, for an even external point.

    Returns None when p already represents <1>.  Scales p so Q matches Q(1),
    then reflects in u-1 (or u+1 when u-1 is isotropic; that maps u to -1,
    the same projective point).
    """
    p = p % ctx.base_embed_exp
    if p == 0:
        return None
    t2 = int(ctx.fq_biglog[ctx.trace_fq[(2 * p) % ctx.n_units]])
    if square_class(ctx, t2) is not SquareClass.SQUARE:
        raise BruenChainsError("transport needs an even external point")
    lam = sqrt_base(ctx, ctx.mul(ctx.scalar(4), ctx.inv(t2)))
    u = ctx.mul(lam, p)
    v = ctx.sub(u, ctx.one)
    if v == ctx.zero or int(ctx.trace_fq[(2 * v) % ctx.n_units]) == 0:
        v = ctx.add(u, ctx.one)
    if v == ctx.zero or int(ctx.trace_fq[(2 * v) % ctx.n_units]) == 0:
        raise AssertionError("no valid transport reflection found")
    res = apply_reflection_point(ctx, v, p)
    if res != 0:
        raise AssertionError("transport reflection failed to move the point to <1>")
    return v
