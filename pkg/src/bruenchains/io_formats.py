"""Serialization: DIMACS graphs, result tables, witness lists, and the
clique-number scatter figure.

All text writers are deterministic byte-for-byte for identical inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EdgeIndexOutOfRange, EmptyRows, MalformedHeader
from .graphs import Graph, pack_bool_rows


@dataclass(frozen=True)
class ResultRow:
    q: int
    kind: str
    n: int
    m: int
    omega: int
    completed: bool
    wall_time_s: float
    witness_path: str | None = None


def write_dimacs(graph: Graph, path) -> None:
    """DIMACS edge format: provenance comments, 'p edge n m', then one
    'e u v' line per edge with 1-indexed u < v."""
    deg = graph.degree_array()
    m = int(deg.sum()) // 2
    lines = []
    if graph.q is not None:
        mod = ",".join(str(c) for c in graph.modulus) if graph.modulus else "?"
        lines.append(f"c bruenchains q={graph.q} kind={graph.kind} modulus={mod}")
        lines.append("c vertex i is labelled by the canonical rep log labels[i-1]")
        if graph.labels is not None:
            lines.append("c labels " + " ".join(str(int(l)) for l in graph.labels))
    lines.append(f"p edge {graph.n} {m}")
    for i in range(graph.n):
        for j in graph.neighbors(i):
            if j > i:
                lines.append(f"e {i + 1} {int(j) + 1}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_dimacs(path) -> Graph:
    """Read a DIMACS edge file back as a graph skeleton (n and edges only;
    comments are ignored)."""
    n = None
    m_declared = None
    edges: list[tuple[int, int]] = []
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("c"):
                continue
            if line.startswith("p"):
                parts = line.split()
                if len(parts) != 4 or parts[1] != "edge":
                    raise MalformedHeader(f"bad problem line: {line!r}")
                try:
                    n, m_declared = int(parts[2]), int(parts[3])
                except ValueError as exc:
                    raise MalformedHeader(f"bad problem line: {line!r}") from exc
                continue
            if line.startswith("e"):
                if n is None:
                    raise MalformedHeader("edge line before 'p edge' header")
                parts = line.split()
                try:
                    u, v = int(parts[1]), int(parts[2])
                except (IndexError, ValueError) as exc:
                    raise MalformedHeader(f"bad edge line: {line!r}") from exc
                if not (1 <= u <= n and 1 <= v <= n):
                    raise EdgeIndexOutOfRange(f"edge ({u},{v}) outside 1..{n}")
                edges.append((u - 1, v - 1))
                continue
            raise MalformedHeader(f"unrecognized line: {line!r}")
    if n is None:
        raise MalformedHeader("file has no 'p edge' header")
    words = (n + 63) // 64
    rows = np.zeros((n, n), dtype=np.uint8)
    for u, v in edges:
        rows[u, v] = 1
        rows[v, u] = 1
    adj = pack_bool_rows(rows) if n else np.zeros((0, words), dtype=np.uint64)
    return Graph(n=n, adj_words=adj)


def write_witness(path, labels) -> None:
    """One whitespace-separated line of vertex labels (rep logs)."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(" ".join(str(int(v)) for v in labels) + "\n")


CSV_HEADER = "q,kind,n,m,omega,completed,wall_time_s"


def write_results_csv(rows: list[ResultRow], path) -> None:
    if not rows:
        raise EmptyRows("no result rows to write")
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(f"{r.q},{r.kind},{r.n},{r.m},{r.omega},"
                     f"{'true' if r.completed else 'false'},{r.wall_time_s:.3f}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def write_figure_svg(rows: list[ResultRow], path) -> None:
    """Scatter of the clique number against q (SVG, or PNG by extension)."""
    if not rows:
        raise EmptyRows("no result rows to plot")
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "bruenchains"
    rows = sorted(rows, key=lambda r: (r.q, r.kind))
    qs = [r.q for r in rows]
    om = [r.omega for r in rows]
    done = [r.completed for r in rows]
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.scatter([q for q, d in zip(qs, done) if d], [o for o, d in zip(om, done) if d],
               s=28, color="tab:blue", label="proven")
    if not all(done):
        ax.scatter([q for q, d in zip(qs, done) if not d],
                   [o for o, d in zip(om, done) if not d],
                   s=28, facecolors="none", edgecolors="tab:red", label="budget-truncated")
        ax.legend(frameon=False)
    ax.set_xlabel("q")
    ax.set_ylabel("clique number")
    ax.grid(True, linewidth=0.3, alpha=0.5)
    ax.set_xlim(min(qs) - 2, max(qs) + 2)
    ax.set_ylim(0, max(om) + 2)
    fmt = "png" if str(path).endswith(".png") else "svg"
    meta = {"Date": None} if fmt == "svg" else {}
    fig.savefig(path, format=fmt, metadata=meta)
    plt.close(fig)
