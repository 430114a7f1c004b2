"""Bruen-chain verification, the clique <-> chain correspondence, and the
chain-file corpus.

A candidate chain is a set of (q+3)/2 points off the quadric.  Core checks:
every pair spans an external line and every triple a secant plane (so the
set is a cap).  Extended checks are consequences for genuine chains: all
points share one isometry type, every tangent plane meets the chain in 0 or
2 points, and the cone of any external point off the chain contains 0 or 2
chain points.

Chain files record exponents of the standard primitive element, so they are
representation-dependent: verifying one against a context built on a
different modulus polynomial is refused.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from importlib import resources

import numpy as np

from .errors import (
    ExponentOutOfRange,
    MalformedLine,
    ModulusMismatch,
    NotAClique,
    PointOnQuadric,
    VertexNotInGraph,
    WrongSize,
    XNotInChain,
)
from .field import FieldCtx, SquareClass
from .graphs import Graph
from .projective import (
    LineType,
    canonical_point,
    collinear,
    line_type,
    singular_points,
    tangent_plane_test,
)
from .symmetry import VertexPerm, apply_reflection_point, transport_reflection

_CHAIN_DIR = ("data", "chains")


@dataclass(frozen=True)
class Chain:
    """A candidate Bruen chain as canonical point reps (sorted)."""

    q: int
    points: tuple[int, ...]
    source_exponents: tuple[int, ...] | None = None
    modulus: tuple[int, ...] | None = None

    @property
    def expected_size(self) -> int:
        return (self.q + 3) // 2


@dataclass
class VerifyReport:
    """Pass/fail per check; overall is the conjunction of the core four."""

    size_ok: bool = False
    pairwise_external_ok: bool = False
    cap_ok: bool = False
    secant_planes_ok: bool = False
    isometry_uniform_ok: bool = False
    tangent_plane_ok: bool = False
    cone_pair_ok: bool = False
    failures: list[str] = dc_field(default_factory=list)

    @property
    def overall(self) -> bool:
        return (self.size_ok and self.pairwise_external_ok
                and self.cap_ok and self.secant_planes_ok)

    def summary_lines(self) -> list[str]:
        checks = [
            ("size", self.size_ok),
            ("pairwise-external", self.pairwise_external_ok),
            ("cap", self.cap_ok),
            ("triple-secant-plane", self.secant_planes_ok),
            ("isometry-uniform", self.isometry_uniform_ok),
            ("tangent-plane-0-or-2", self.tangent_plane_ok),
            ("cone-pair-count", self.cone_pair_ok),
        ]
        lines = [f"  {name:<22} {'pass' if ok else 'FAIL'}" for name, ok in checks]
        lines.append(f"  overall{'':<15} {'pass' if self.overall else 'FAIL'}")
        return lines


def chain_from_exponents(ctx: FieldCtx, exponents, modulus=None) -> Chain:
    """Canonicalize an exponent list into a Chain for this context."""
    exps = [int(e) for e in exponents]
    for e in exps:
        if e < 0:
            raise ExponentOutOfRange(f"negative exponent {e}")
    if modulus is not None and tuple(modulus) != ctx.modulus:
        raise ModulusMismatch(
            "chain exponents were recorded for modulus "
            f"{tuple(modulus)}, context uses {ctx.modulus}"
            + ("" if ctx.is_conway else " (non-Conway fallback)"))
    pts = sorted({e % ctx.n_units % ctx.base_embed_exp for e in exps})
    return Chain(q=ctx.q, points=tuple(pts), source_exponents=tuple(exps),
                 modulus=tuple(modulus) if modulus is not None else None)


# --- verification ------------------------------------------------------------------


def verify_chain(ctx: FieldCtx, chain: Chain, *, cone_samples: int = 400,
                 seed: int = 0) -> VerifyReport:
    """Run the core and extended checks; failures identify the offending
    pair/triple/plane so a perturbed chain is localized."""
    pts = list(chain.points)
    rep = VerifyReport()
    want = (ctx.q + 3) // 2
    if len(pts) != want:
        raise WrongSize(f"chain has {len(pts)} points, expected {want}")
    rep.size_ok = True
    kinds = [canonical_point(ctx, p) for p in pts]
    for P in kinds:
        if P.q_class is SquareClass.ZERO:
            raise PointOnQuadric(f"chain point <z^{P.rep}> lies on the quadric")

    rep.pairwise_external_ok = True
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            lt = line_type(ctx, pts[i], pts[j])
            if lt is not LineType.EXTERNAL:
                rep.pairwise_external_ok = False
                rep.failures.append(
                    f"pair ({pts[i]},{pts[j]}) spans a {lt.name.lower()} line")

    rep.cap_ok = True
    rep.secant_planes_ok = True
    m = len(pts)
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(j + 1, m):
                tri = (pts[i], pts[j], pts[k])
                if collinear(ctx, *tri):
                    rep.cap_ok = False
                    rep.failures.append(f"triple {tri} is collinear")
                    continue
                if tangent_plane_test(ctx, *tri):
                    rep.secant_planes_ok = False
                    rep.failures.append(f"triple {tri} spans a tangent plane")

    rep.isometry_uniform_ok = len({P.q_class for P in kinds}) == 1
    if not rep.isometry_uniform_ok:
        rep.failures.append("points of both isometry types present")

    # tangent planes are the polars of quadric points
    rep.tangent_plane_ok = True
    pts_arr = np.array(pts, dtype=np.int64)
    for g in singular_points(ctx):
        cnt = int((ctx.trace_fq[(int(g) + pts_arr) % ctx.n_units] == 0).sum())
        if cnt not in (0, 2):
            rep.tangent_plane_ok = False
            rep.failures.append(f"tangent plane of <z^{int(g)}> meets chain in {cnt}")

    rep.cone_pair_ok = _check_cone_pairs(ctx, pts_arr, cone_samples, seed, rep)
    return rep


def _check_cone_pairs(ctx, pts_arr, samples, seed, rep) -> bool:
    """For external P off the chain, |cone(P) * chain| must be 0 or 2."""
    E = ctx.base_embed_exp
    r = np.arange(E, dtype=np.int64)
    t2 = ctx.trace_fq[(2 * r) % ctx.n_units]
    ext = r[(t2 != 0)]
    ext = ext[~np.isin(ext, pts_arr)]
    if len(ext) > samples:
        rng = np.random.default_rng(seed)
        ext = rng.choice(ext, size=samples, replace=False)
    ok = True
    tc2 = ctx.trace_fq[(2 * pts_arr) % ctx.n_units]
    for p in ext:
        tpc = ctx.trace_fq[(int(p) + pts_arr) % ctx.n_units]
        tp2 = int(ctx.trace_fq[(2 * int(p)) % ctx.n_units])
        disc = ctx.fq_add[ctx.fq_mul[tpc, tpc], ctx.fq_neg[ctx.fq_mul[tp2, tc2]]]
        cnt = int((disc == 0).sum())
        if cnt not in (0, 2):
            ok = False
            rep.failures.append(f"cone of <z^{int(p)}> meets chain in {cnt} points")
    return ok


# --- clique <-> chain --------------------------------------------------------------


def clique_to_chain(ctx: FieldCtx, graph: Graph, clique) -> Chain:
    """Adjoin <1> to a verified (q+1)/2-clique; the result must pass the
    core chain checks (that is the content of the correspondence theorem,
    so a failure raises)."""
    vs = sorted(int(v) for v in clique)
    want = (ctx.q + 1) // 2
    if len(vs) != want:
        raise WrongSize(f"clique has {len(vs)} vertices, expected {want}")
    if not graph.is_clique(vs):
        raise NotAClique("vertex set is not a clique of the given graph")
    pts = tuple(sorted([0] + [int(graph.labels[v]) for v in vs]))
    chain = Chain(q=ctx.q, points=pts)
    report = verify_chain(ctx, chain, cone_samples=0)
    if not report.overall:
        raise AssertionError(
            "clique does not close into a Bruen chain: " + "; ".join(report.failures))
    return chain


def chain_to_clique(ctx: FieldCtx, chain: Chain, graph: Graph) -> list[int]:
    """Vertex indices of chain \\ {<1>}; pairwise adjacent in the graph."""
    if 0 not in chain.points:
        raise XNotInChain("chain does not contain <1>; transport it first")
    index = {int(l): i for i, l in enumerate(graph.labels)}
    out = []
    for p in chain.points:
        if p == 0:
            continue
        if p not in index:
            raise VertexNotInGraph(
                f"chain point <z^{p}> is not a vertex (isometry class mismatch?)")
        out.append(index[p])
    out.sort()
    if not graph.is_clique(out):
        raise NotAClique("chain points are not pairwise adjacent in this graph")
    return out


# --- chain files --------------------------------------------------------------------


def parse_chain_text(text: str) -> tuple[int, tuple[int, ...] | None, list[int]]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("q"):
        raise MalformedLine("chain file must start with 'q <value>'")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "q":
        raise MalformedLine(f"bad header line: {lines[0]!r}")
    try:
        q = int(head[1])
    except ValueError as exc:
        raise MalformedLine(f"bad q value: {head[1]!r}") from exc
    body = lines[1:]
    modulus = None
    if body and body[0].startswith("modulus"):
        try:
            modulus = tuple(int(t) for t in body[0].split()[1:])
        except ValueError as exc:
            raise MalformedLine(f"bad modulus line: {body[0]!r}") from exc
        body = body[1:]
    exps: list[int] = []
    for ln in body:
        for tok in ln.split():
            try:
                val = int(tok)
            except ValueError as exc:
                raise MalformedLine(f"bad exponent token {tok!r}") from exc
            if val < 0:
                raise ExponentOutOfRange(f"negative exponent {val}")
            exps.append(val)
    if not exps:
        raise MalformedLine("chain file carries no exponents")
    return q, modulus, exps


def parse_chain_file(path) -> tuple[int, tuple[int, ...] | None, list[int]]:
    with open(path, "r", encoding="ascii") as fh:
        return parse_chain_text(fh.read())


def format_chain_file(q: int, exponents, modulus=None) -> str:
    lines = [f"q {q}"]
    if modulus is not None:
        lines.append("modulus " + " ".join(str(c) for c in modulus))
    lines.append(" ".join(str(e) for e in exponents))
    return "\n".join(lines) + "\n"


def write_chain_file(path, q: int, exponents, modulus=None) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_chain_file(q, exponents, modulus))


def load_chain(ctx: FieldCtx, path) -> Chain:
    q, modulus, exps = parse_chain_file(path)
    if q != ctx.q:
        raise ModulusMismatch(f"chain file is for q={q}, context is q={ctx.q}")
    return chain_from_exponents(ctx, exps, modulus=modulus)


def _corpus_root():
    return resources.files("bruenchains").joinpath("/".join(_CHAIN_DIR))


def corpus_names() -> list[str]:
    return sorted(p.name for p in _corpus_root().iterdir() if p.name.endswith(".txt"))


def load_corpus() -> list[tuple[str, int, tuple[int, ...] | None, list[int]]]:
    """The bundled published chains: (name, q, modulus, exponents) per file."""
    out = []
    root = _corpus_root()
    for name in corpus_names():
        q, modulus, exps = parse_chain_text(root.joinpath(name).read_text("ascii"))
        out.append((name, q, modulus, exps))
    return out


# --- enumeration up to isometry ------------------------------------------------------


def _closure_min(clique: tuple[int, ...], gens: list[VertexPerm],
                 memo: dict[tuple[int, ...], tuple[int, ...]]) -> tuple[int, ...]:
    """Minimal sorted tuple in the orbit of a clique under the generated
    subgroup (BFS closure; memoized across calls)."""
    if clique in memo:
        return memo[clique]
    seen = {clique}
    frontier = [clique]
    while frontier:
        nxt = []
        for cl in frontier:
            for g in gens:
                img = tuple(sorted(int(g.perm[v]) for v in cl))
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    key = min(seen)
    for cl in seen:
        memo[cl] = key
    return key


def chain_class_key(ctx: FieldCtx, chain: Chain, graph: Graph,
                    gens: list[VertexPerm],
                    memo: dict | None = None) -> tuple[int, ...]:
    """Canonical key of the chain's isometry class.

    Transports each chain point in turn onto <1> by an explicit reflection,
    reads off the residual clique, and closes under the X-stabilizer
    subgroup; the minimum over all transports is invariant under any
    isometry mapping one chain onto another.
    """
    if memo is None:
        memo = {}
    index = {int(l): i for i, l in enumerate(graph.labels)}
    best: tuple[int, ...] | None = None
    for p in chain.points:
        v = transport_reflection(ctx, p)
        if v is None:
            imgs = list(chain.points)
        else:
            imgs = [apply_reflection_point(ctx, v, x) for x in chain.points]
        rest = sorted(x for x in imgs if x != 0)
        if len(rest) != len(chain.points) - 1 or 0 not in imgs:
            raise AssertionError("transport produced a degenerate chain image")
        clique = tuple(sorted(index[x] for x in rest))
        key = _closure_min(clique, gens, memo)
        if best is None or key < best:
            best = key
    return best


@dataclass(frozen=True)
class ChainClass:
    key: tuple[int, ...]
    representative: Chain
    n_cliques_found: int


def enumerate_chain_classes(ctx: FieldCtx, graph: Graph, gens: list[VertexPerm],
                            starters, *, cap: int = 2_000_000) -> list[ChainClass]:
    """All Bruen chains through the graph, grouped up to isometry.

    Enumerates (q+1)/2-cliques through the starter vertices, adjoins <1>,
    and groups the resulting chains by their transport-closure class key.
    The class count is exact when the generators produce the full stabilizer
    (which the acceptance suite checks against the published counts).
    """
    from .clique import cliques_of_size

    k = (ctx.q + 1) // 2
    cliques = cliques_of_size(graph, k, starters=starters, cap=cap)
    memo: dict = {}
    classes: dict[tuple[int, ...], list[Chain]] = {}
    for cl in cliques:
        chain = clique_to_chain(ctx, graph, cl)
        key = chain_class_key(ctx, chain, graph, gens, memo)
        classes.setdefault(key, []).append(chain)
    out = []
    for key in sorted(classes):
        members = classes[key]
        rep_chain = min(members, key=lambda c: c.points)
        out.append(ChainClass(key=key, representative=rep_chain,
                              n_cliques_found=len(members)))
    return out
