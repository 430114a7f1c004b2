"""Command-line surface: build -> (export|solve) -> verify/enumerate -> report.

Exit codes: 0 success (answers proven), 2 budget-truncated (answer returned
but unproven), 1 usage or data error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import chains as chains_mod
from . import clique as clique_mod
from . import graphs as graphs_mod
from . import io_formats as io_mod
from . import symmetry as symmetry_mod
from .conway import CONWAY_ENV
from .errors import BruenChainsError
from .field import make_field

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_TRUNCATED = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _add_field_flags(p):
    p.add_argument("--force-large-field", action="store_true",
                   help="lift the q<=53 table guard and the memory budget")


def _add_graph_flags(p):
    p.add_argument("--q", type=int, required=True, help="odd prime power >= 5")
    p.add_argument("--graph", choices=("gamma", "delta"), default="gamma")
    _add_field_flags(p)


def _add_solver_flags(p):
    p.add_argument("--starters", choices=("none", "orbits"), default="orbits",
                   help="seed the search with one vertex per stabilizer orbit")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--budget-s", type=float, default=None,
                   help="wall-clock budget; expiry returns the best found (exit 2)")
    p.add_argument("--gens", type=int, default=None,
                   help="cap on the reflection scan length")


def build_parser() -> _Parser:
    ap = _Parser(
        prog="bruenchains",
        description="Bruen chains in PG(3,q): graphs, exact cliques, verification.",
        epilog=f"Environment: {CONWAY_ENV} overrides the bundled Conway polynomial table.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-graph", help="build Gamma_X or Delta_X and export DIMACS")
    _add_graph_flags(p)
    p.add_argument("--out", required=True, help="output DIMACS path")

    p = sub.add_parser("clique-number", help="exact clique number via branch and bound")
    _add_graph_flags(p)
    _add_solver_flags(p)
    p.add_argument("--target-size", type=int, default=None,
                   help="find a clique of this size or prove none exists")
    p.add_argument("--witness-out", default=None, help="write the witness labels here")

    p = sub.add_parser("find-chains", help="enumerate Bruen chains up to isometry")
    _add_graph_flags(p)
    _add_solver_flags(p)
    p.add_argument("--out", default=None, help="directory for chain files")
    p.add_argument("--allow-non-conway", action="store_true",
                   help="permit exponent output under a non-Conway modulus")

    p = sub.add_parser("verify-chain", help="verify a chain file")
    p.add_argument("--file", required=True)
    p.add_argument("--allow-non-conway", action="store_true")
    _add_field_flags(p)

    p = sub.add_parser("orbits", help="stabilizer generators and vertex orbits")
    _add_graph_flags(p)
    p.add_argument("--gens", type=int, default=None)

    p = sub.add_parser("report", help="clique numbers over a q range: CSV + figure")
    p.add_argument("--qs", required=True, help="comma-separated q list, e.g. 5,7,9")
    p.add_argument("--graph", choices=("gamma", "delta"), default="gamma")
    p.add_argument("--out-dir", required=True)
    _add_solver_flags(p)
    _add_field_flags(p)

    p = sub.add_parser("corpus-check", help="verify the bundled published chains")
    return ap


def _make_ctx(q: int, force: bool):
    ctx = make_field(q, force_large_field=force)
    if not ctx.is_conway:
        print(f"note: no Conway polynomial bundled for q={q}; "
              f"using fallback modulus {ctx.modulus}", file=sys.stderr)
    return ctx


def _build(args):
    ctx = _make_ctx(args.q, args.force_large_field)
    graph = (graphs_mod.build_gamma(ctx) if args.graph == "gamma"
             else graphs_mod.build_delta(ctx))
    return ctx, graph


def _starter_list(ctx, graph, args):
    if args.starters == "none":
        return None, None
    gens = symmetry_mod.stabilizer_generators(ctx, graph, max_scan=args.gens)
    orbits = symmetry_mod.vertex_orbits(graph, gens)
    return gens, orbits


def cmd_build_graph(args) -> int:
    ctx, graph = _build(args)
    io_mod.write_dimacs(graph, args.out)
    print(f"q={args.q} graph={args.graph} n={graph.n} m={graph.edge_count()} "
          f"-> {args.out}")
    return EXIT_OK


def cmd_clique_number(args) -> int:
    ctx, graph = _build(args)
    gens, orbits = _starter_list(ctx, graph, args)
    starters = orbits.reps.tolist() if orbits is not None else None
    cfg = clique_mod.SearchConfig(
        target_size=args.target_size,
        starters=starters,
        time_budget_s=args.budget_s,
        thread_count=args.threads,
        upper_bound=(args.q + 1) // 2,
    )
    res = clique_mod.max_clique(graph, cfg)
    print(f"q={args.q} graph={args.graph} n={graph.n} m={graph.edge_count()} "
          f"starters={'none' if starters is None else len(starters)} "
          f"nodes={res.nodes_explored} time={res.wall_time_s:.1f}s")
    if args.target_size is not None:
        if res.size >= args.target_size:
            print(f"clique of size {args.target_size}: found")
        elif res.completed:
            print(f"clique of size {args.target_size}: none (proven)")
        else:
            print(f"clique of size {args.target_size}: not found (budget exhausted)")
            return EXIT_TRUNCATED
    else:
        if res.completed:
            print(f"omega = {res.size} (proven)")
        else:
            print(f"omega >= {res.size} (budget exhausted, unproven)")
    if res.witness:
        labels = [int(graph.labels[v]) for v in res.witness]
        print("witness:", " ".join(str(v) for v in labels))
        if args.witness_out:
            io_mod.write_witness(args.witness_out, labels)
    return EXIT_OK if res.completed else EXIT_TRUNCATED


def cmd_find_chains(args) -> int:
    ctx, graph = _build(args)
    if not ctx.is_conway and not args.allow_non_conway:
        raise BruenChainsError(
            "no Conway polynomial for this q: exponent output would not be "
            "portable; pass --allow-non-conway to proceed")
    gens, orbits = _starter_list(ctx, graph, args)
    if gens is None:
        gens = symmetry_mod.stabilizer_generators(ctx, graph, max_scan=args.gens)
        orbits = symmetry_mod.vertex_orbits(graph, gens)
    classes = chains_mod.enumerate_chain_classes(
        ctx, graph, gens, orbits.reps.tolist())
    print(f"q={args.q}: {len(classes)} chain class(es) up to isometry")
    for i, cls in enumerate(classes, 1):
        rep = cls.representative
        report = chains_mod.verify_chain(ctx, rep)
        status = "pass" if report.overall else "FAIL"
        print(f"class {i}: {len(rep.points)} points, verification {status}, "
              f"exponents: {' '.join(str(p) for p in rep.points)}")
        if args.out:
            os.makedirs(args.out, exist_ok=True)
            path = os.path.join(args.out, f"chain_q{args.q:02d}_class{i}.txt")
            chains_mod.write_chain_file(path, args.q, rep.points, ctx.modulus)
            print(f"  -> {path}")
    return EXIT_OK


def cmd_verify_chain(args) -> int:
    q, modulus, exps = chains_mod.parse_chain_file(args.file)
    ctx = _make_ctx(q, args.force_large_field)
    if not ctx.is_conway and not args.allow_non_conway and modulus is None:
        raise BruenChainsError(
            "chain file has no modulus line and the context is non-Conway; "
            "pass --allow-non-conway to interpret exponents anyway")
    chain = chains_mod.chain_from_exponents(ctx, exps, modulus=modulus)
    report = chains_mod.verify_chain(ctx, chain)
    print(f"{args.file}: q={q}, {len(chain.points)} points")
    for line in report.summary_lines():
        print(line)
    for f in report.failures:
        print("  detail:", f)
    return EXIT_OK if report.overall else EXIT_ERROR


def cmd_orbits(args) -> int:
    ctx, graph = _build(args)
    gens = symmetry_mod.stabilizer_generators(ctx, graph, max_scan=args.gens)
    orbits = symmetry_mod.vertex_orbits(graph, gens)
    sizes = sorted(
        (int((orbits.orbit_id == k).sum()) for k in range(orbits.n_orbits)),
        reverse=True)
    print(f"q={args.q} graph={args.graph} n={graph.n}")
    print(f"generators: {len(gens)}")
    print(f"orbits: {orbits.n_orbits} (sizes {sizes})")
    print("representatives:", " ".join(str(int(r)) for r in orbits.reps))
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        qs = [int(tok) for tok in args.qs.split(",") if tok]
    except ValueError as exc:
        raise _UsageError(f"bad --qs value {args.qs!r}") from exc
    if not qs:
        raise _UsageError("--qs needs at least one value")
    os.makedirs(args.out_dir, exist_ok=True)
    rows = []
    any_truncated = False
    for q in sorted(qs):
        ctx = _make_ctx(q, args.force_large_field)
        graph = (graphs_mod.build_gamma(ctx) if args.graph == "gamma"
                 else graphs_mod.build_delta(ctx))
        t0 = time.perf_counter()
        gens, orbits = _starter_list(ctx, graph, args)
        cfg = clique_mod.SearchConfig(
            starters=orbits.reps.tolist() if orbits is not None else None,
            time_budget_s=args.budget_s,
            thread_count=args.threads,
            upper_bound=(q + 1) // 2,
        )
        res = clique_mod.max_clique(graph, cfg)
        wall = time.perf_counter() - t0
        wpath = None
        if res.witness:
            wpath = os.path.join(args.out_dir, f"witness_q{q:02d}_{args.graph}.txt")
            io_mod.write_witness(wpath, [int(graph.labels[v]) for v in res.witness])
        rows.append(io_mod.ResultRow(q=q, kind=args.graph, n=graph.n,
                                     m=graph.edge_count(), omega=res.size,
                                     completed=res.completed, wall_time_s=wall,
                                     witness_path=wpath))
        any_truncated |= not res.completed
        print(f"q={q}: omega={res.size} {'(proven)' if res.completed else '(truncated)'} "
              f"[{wall:.1f}s]")
    csv_path = os.path.join(args.out_dir, "results.csv")
    io_mod.write_results_csv(rows, csv_path)
    svg_path = os.path.join(args.out_dir, "figure.svg")
    png_path = os.path.join(args.out_dir, "figure.png")
    io_mod.write_figure_svg(rows, svg_path)
    io_mod.write_figure_svg(rows, png_path)
    print(f"wrote {csv_path}, {svg_path}, {png_path}")
    return EXIT_TRUNCATED if any_truncated else EXIT_OK


def cmd_corpus_check(args) -> int:
    t0 = time.perf_counter()
    n_pass = 0
    entries = chains_mod.load_corpus()
    for name, q, modulus, exps in entries:
        ctx = make_field(q)
        chain = chains_mod.chain_from_exponents(ctx, exps, modulus=modulus)
        report = chains_mod.verify_chain(ctx, chain)
        full = (report.overall and report.isometry_uniform_ok
                and report.tangent_plane_ok and report.cone_pair_ok)
        n_pass += full
        print(f"{name:<12} q={q:<3} {'pass' if full else 'FAIL'}")
        if not full:
            for f in report.failures:
                print("   ", f)
    print(f"{n_pass}/{len(entries)} chains pass  [{time.perf_counter() - t0:.1f}s]")
    return EXIT_OK if n_pass == len(entries) else EXIT_ERROR


_COMMANDS = {
    "build-graph": cmd_build_graph,
    "clique-number": cmd_clique_number,
    "find-chains": cmd_find_chains,
    "verify-chain": cmd_verify_chain,
    "orbits": cmd_orbits,
    "report": cmd_report,
    "corpus-check": cmd_corpus_check,
}


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (BruenChainsError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(cli_main())
