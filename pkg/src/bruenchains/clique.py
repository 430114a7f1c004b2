"""Exact maximum-clique search and fixed-size clique enumeration on bitset
graphs: branch and bound with bit-parallel greedy coloring bounds.

Vertices are ordered by descending degree (ties by index) once at the start;
the branch order is then fixed, so single-threaded node counts are
reproducible.  The search state lives in explicit stack arrays so a run can
pause on a node budget and resume, which is how wall-clock budgets are
enforced without timing calls inside the kernels.  Multi-threaded runs share
only a monotone best-size lower bound, which preserves exactness for any
interleaving (a stale value merely prunes less).
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np
from numba import njit, uint64

from .graphs import Graph, pack_bool_rows

_SLICE_NODES = 4_000_000

_M1 = uint64(0x5555555555555555)
_M2 = uint64(0x3333333333333333)
_M4 = uint64(0x0F0F0F0F0F0F0F0F)
_H01 = uint64(0x0101010101010101)


@njit(cache=True, nogil=True, inline="always")
def _ctz64(x):
    n = 0
    if x & uint64(0xFFFFFFFF) == uint64(0):
        n += 32
        x >>= uint64(32)
    if x & uint64(0xFFFF) == uint64(0):
        n += 16
        x >>= uint64(16)
    if x & uint64(0xFF) == uint64(0):
        n += 8
        x >>= uint64(8)
    if x & uint64(0xF) == uint64(0):
        n += 4
        x >>= uint64(4)
    if x & uint64(0x3) == uint64(0):
        n += 2
        x >>= uint64(2)
    if x & uint64(1) == uint64(0):
        n += 1
    return n


@njit(cache=True, nogil=True)
def _color_sort(adjw, P, C, K, rem, Q):
    """Greedy-color the candidate set P; fill C with vertices sorted by
    ascending color class and K with their class numbers.  Returns count."""
    w = adjw.shape[1]
    for t in range(w):
        rem[t] = P[t]
    idx = 0
    cls = 0
    while True:
        start = -1
        for t in range(w):
            if rem[t] != uint64(0):
                start = t
                break
        if start < 0:
            break
        cls += 1
        for t in range(w):
            Q[t] = rem[t]
        t = start
        while t < w:
            x = Q[t]
            if x == uint64(0):
                t += 1
                continue
            b = _ctz64(x)
            v = (t << 6) + b
            bit = uint64(1) << uint64(b)
            Q[t] &= ~bit
            rem[t] &= ~bit
            row = adjw[v]
            for s in range(w):
                Q[s] &= ~row[s]
            C[idx] = v
            K[idx] = cls
            idx += 1
    return idx


DONE = 0
PAUSED = 1
HIT_UPPER = 2
OVERFLOW = 3


@njit(cache=True, nogil=True)
def _search_max(adjw, stackP, stackC, stackK, stackIdx, chosen,
                best_arr, witness, shared_best, meta, rem, Q,
                node_budget, upper_stop, base_depth):
    """Resumable branch and bound; meta = [depth, nodes, witness_len]."""
    w = adjw.shape[1]
    depth = meta[0]
    nodes = meta[1]
    best = best_arr[0]
    while True:
        if depth < base_depth:
            meta[0] = depth
            meta[1] = nodes
            best_arr[0] = best
            return DONE
        if nodes >= node_budget:
            meta[0] = depth
            meta[1] = nodes
            best_arr[0] = best
            return PAUSED
        sb = shared_best[0]
        if sb > best:
            best = sb
        i = stackIdx[depth]
        if i < 0:
            depth -= 1
            continue
        v = stackC[depth, i]
        k = stackK[depth, i]
        if depth + k <= best:
            depth -= 1
            continue
        stackIdx[depth] = i - 1
        stackP[depth, v >> 6] &= ~(uint64(1) << uint64(v & 63))
        chosen[depth] = v
        nodes += 1
        row = adjw[v]
        nz = uint64(0)
        for t in range(w):
            x = stackP[depth, t] & row[t]
            stackP[depth + 1, t] = x
            nz |= x
        if nz == uint64(0):
            if depth + 1 > best:
                best = depth + 1
                best_arr[0] = best
                meta[2] = depth + 1
                for d in range(depth + 1):
                    witness[d] = chosen[d]
                if shared_best[0] < best:
                    shared_best[0] = best
                if best >= upper_stop:
                    meta[0] = depth
                    meta[1] = nodes
                    return HIT_UPPER
            continue
        cnt = _color_sort(adjw, stackP[depth + 1], stackC[depth + 1],
                          stackK[depth + 1], rem, Q)
        if depth + 1 + stackK[depth + 1, cnt - 1] > best:
            stackIdx[depth + 1] = cnt - 1
            depth += 1


@njit(cache=True, nogil=True)
def _search_enum(adjw, stackP, stackC, stackK, stackIdx, chosen,
                 out, meta, rem, Q, k_target, base_depth):
    """Collect every clique of exact size k_target extending chosen[:base].
    meta = [depth, nodes, emitted]."""
    w = adjw.shape[1]
    depth = meta[0]
    nodes = meta[1]
    emitted = meta[2]
    cap = out.shape[0]
    while True:
        if depth < base_depth:
            meta[0] = depth
            meta[1] = nodes
            meta[2] = emitted
            return DONE
        i = stackIdx[depth]
        if i < 0:
            depth -= 1
            continue
        v = stackC[depth, i]
        k = stackK[depth, i]
        if depth + k < k_target:
            depth -= 1
            continue
        stackIdx[depth] = i - 1
        stackP[depth, v >> 6] &= ~(uint64(1) << uint64(v & 63))
        chosen[depth] = v
        nodes += 1
        if depth + 1 == k_target:
            if emitted >= cap:
                meta[2] = emitted
                return OVERFLOW
            for d in range(depth + 1):
                out[emitted, d] = chosen[d]
            emitted += 1
            continue
        row = adjw[v]
        nz = uint64(0)
        for t in range(w):
            x = stackP[depth, t] & row[t]
            stackP[depth + 1, t] = x
            nz |= x
        if nz == uint64(0):
            continue
        cnt = _color_sort(adjw, stackP[depth + 1], stackC[depth + 1],
                          stackK[depth + 1], rem, Q)
        if depth + 1 + stackK[depth + 1, cnt - 1] >= k_target:
            stackIdx[depth + 1] = cnt - 1
            depth += 1


# --- python-side plumbing --------------------------------------------------------


@dataclass
class SearchConfig:
    """Knobs for the exact search.

    target_size: find cliques of size >= k or prove none (sets the starting
    lower bound to k-1 and stops at the first hit).
    starters: vertex indices (orbit representatives); the search explores only
    cliques through a starter, which is exact for the maximum when the
    starters hit every automorphism orbit.
    upper_bound: a proven bound on omega; the search halts once it is attained.
    """

    target_size: int | None = None
    starters: list[int] | None = None
    initial_lower_bound: int = 0
    time_budget_s: float | None = None
    thread_count: int = 1
    upper_bound: int | None = None


@dataclass
class SearchResult:
    size: int
    witness: list[int] = dc_field(default_factory=list)
    completed: bool = True
    nodes_explored: int = 0
    wall_time_s: float = 0.0
    reached_upper_bound: bool = False

    @property
    def clique_number(self) -> int:
        return self.size


class _Ordered:
    """Graph reordered by descending degree (ties by index)."""

    def __init__(self, graph: Graph):
        self.n = graph.n
        deg = graph.degree_array()
        self.order = np.argsort(-deg, kind="stable").astype(np.int64)
        self.inv = np.empty(self.n, dtype=np.int64)
        self.inv[self.order] = np.arange(self.n)
        self.adjw = _reorder_packed(graph.adj_words, graph.n, self.order)
        self.words = self.adjw.shape[1]


def _reorder_packed(adj_words: np.ndarray, n: int, order: np.ndarray) -> np.ndarray:
    out = np.empty((n, (n + 63) // 64), dtype=np.uint64)
    chunk = max(1, (1 << 24) // max(n, 1))
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        rows = np.unpackbits(adj_words[order[lo:hi]].view(np.uint8),
                             axis=1, bitorder="little")[:, :n]
        out[lo:hi] = pack_bool_rows(rows[:, order].astype(np.uint8))
    return out


class _State:
    """Explicit-stack search state; levels is an upper bound on the depth."""

    def __init__(self, og: _Ordered, base: list[int], P0: np.ndarray):
        d = len(base)
        C0 = np.zeros(og.n, dtype=np.int32)
        K0 = np.zeros(og.n, dtype=np.int32)
        rem = np.zeros(og.words, dtype=np.uint64)
        Q = np.zeros(og.words, dtype=np.uint64)
        cnt = int(_color_sort(og.adjw, P0.copy(), C0, K0, rem, Q))
        bound = int(K0[cnt - 1]) if cnt else 0
        levels = d + bound + 2
        self.levels = levels
        self.base_depth = d
        self.root_empty = cnt == 0
        self.stackP = np.zeros((levels, og.words), dtype=np.uint64)
        self.stackC = np.zeros((levels, og.n), dtype=np.int32)
        self.stackK = np.zeros((levels, og.n), dtype=np.int32)
        self.stackIdx = np.full(levels, -1, dtype=np.int32)
        self.chosen = np.zeros(levels, dtype=np.int32)
        self.rem = rem
        self.Q = Q
        self.meta = np.zeros(3, dtype=np.int64)
        for t, v in enumerate(base):
            self.chosen[t] = v
        self.stackP[d] = P0
        self.stackC[d, :cnt] = C0[:cnt]
        self.stackK[d, :cnt] = K0[:cnt]
        if cnt:
            self.stackIdx[d] = cnt - 1
            self.meta[0] = d
        else:
            self.meta[0] = d - 1


def _full_bitset(n: int, words: int) -> np.ndarray:
    P = np.zeros(words, dtype=np.uint64)
    full, rem = divmod(n, 64)
    P[:full] = np.uint64(0xFFFFFFFFFFFFFFFF)
    if rem:
        P[full] = np.uint64((1 << rem) - 1)
    return P


def max_clique(graph: Graph, config: SearchConfig | None = None) -> SearchResult:
    """Exact clique number with witness.  If the time budget expires, the
    best clique found so far is returned with completed=False."""
    config = config or SearchConfig()
    t0 = time.perf_counter()
    n = graph.n
    if n == 0:
        return SearchResult(size=0, witness=[], wall_time_s=time.perf_counter() - t0)

    og = _Ordered(graph)
    lower = config.initial_lower_bound
    if config.target_size is not None:
        lower = max(lower, config.target_size - 1)
    upper_stop = config.upper_bound if config.upper_bound is not None else n + 1
    if config.target_size is not None:
        upper_stop = min(upper_stop, config.target_size)

    if config.starters is not None:
        starters_int = sorted(int(og.inv[s]) for s in config.starters)
        subproblems = [([s], og.adjw[s].copy()) for s in starters_int]
    else:
        subproblems = [([], _full_bitset(n, og.words))]

    shared_best = np.array([lower], dtype=np.int64)
    deadline = (t0 + config.time_budget_s) if config.time_budget_s is not None else None
    truncated = [False]
    hit_upper = [False]
    results: list[tuple[int, list[int], int]] = []

    def run(sub) -> None:
        base, P0 = sub
        if truncated[0] or hit_upper[0]:
            return
        st = _State(og, base, P0)
        if st.root_empty:
            # the base alone is the only clique in this subproblem
            results.append((len(base), list(base), 0))
            return
        best_arr = np.array([shared_best[0]], dtype=np.int64)
        witness = np.zeros(st.levels, dtype=np.int32)
        while True:
            status = _search_max(og.adjw, st.stackP, st.stackC, st.stackK,
                                 st.stackIdx, st.chosen, best_arr, witness,
                                 shared_best, st.meta, st.rem, st.Q,
                                 int(st.meta[1]) + _SLICE_NODES, upper_stop,
                                 st.base_depth)
            if status == PAUSED:
                if deadline is not None and time.perf_counter() > deadline:
                    truncated[0] = True
                    break
                continue
            if status == HIT_UPPER:
                hit_upper[0] = True
            break
        wlen = int(st.meta[2])
        results.append((wlen, [int(v) for v in witness[:wlen]], int(st.meta[1])))

    if config.thread_count > 1 and len(subproblems) > 1:
        with ThreadPoolExecutor(max_workers=config.thread_count) as pool:
            list(pool.map(run, subproblems))
    else:
        for sub in subproblems:
            run(sub)
            if hit_upper[0] or truncated[0]:
                break

    best = int(shared_best[0])
    nodes = sum(r[2] for r in results)
    best_witness: list[int] = []
    for wlen, wit, _ in results:
        if wlen == best and wlen > 0:
            best_witness = sorted(int(og.order[v]) for v in wit)
            break
    res = SearchResult(size=best, witness=best_witness,
                       completed=not truncated[0], nodes_explored=nodes,
                       wall_time_s=time.perf_counter() - t0,
                       reached_upper_bound=hit_upper[0])
    if res.witness:
        _verify_witness(graph, res.witness, res.size)
    return res


def _verify_witness(graph: Graph, witness: list[int], size: int) -> None:
    if len(witness) != size or not graph.is_clique(witness):
        raise AssertionError("solver produced an invalid witness")


def cliques_of_size(graph: Graph, k: int, starters=None, cap: int = 2_000_000,
                    ) -> list[tuple[int, ...]]:
    """All k-cliques (all containing at least one starter, when starters are
    given), as sorted tuples of vertex indices."""
    n = graph.n
    if not 0 < k <= n:
        raise ValueError(f"k={k} out of range 1..{n}")
    og = _Ordered(graph)
    if k == 1:
        base = sorted(set(int(s) for s in starters)) if starters is not None else range(n)
        return [(int(v),) for v in base]

    out = np.zeros((cap, k), dtype=np.int32)
    found: set[frozenset[int]] = set()
    ordered: list[tuple[int, ...]] = []

    if starters is not None:
        roots = [(int(og.inv[s]), og.adjw[int(og.inv[s])].copy())
                 for s in sorted(int(s) for s in starters)]
        dedupe = True
    else:
        running = _full_bitset(n, og.words)
        roots = []
        for v in range(n):
            running[v >> 6] &= ~(np.uint64(1) << np.uint64(v & 63))
            roots.append((v, og.adjw[v] & running))
        dedupe = False

    for v, P0 in roots:
        st = _State(og, [v], P0)
        if st.root_empty:
            continue
        status = _search_enum(og.adjw, st.stackP, st.stackC, st.stackK,
                              st.stackIdx, st.chosen, out, st.meta,
                              st.rem, st.Q, k, st.base_depth)
        if status == OVERFLOW:
            raise RuntimeError(f"more than {cap} cliques of size {k}")
        for row in out[: int(st.meta[2])]:
            ext = tuple(sorted(int(og.order[u]) for u in row[:k]))
            if dedupe:
                key = frozenset(ext)
                if key in found:
                    continue
                found.add(key)
            ordered.append(ext)
    return sorted(ordered)


def greedy_color_bound(graph: Graph, candidate_set=None) -> int:
    """Number of greedy color classes on the candidate set: an upper bound
    on the clique number of the induced subgraph."""
    n = graph.n
    if candidate_set is None:
        P = _full_bitset(n, graph.words_per_row)
    else:
        bits = np.zeros(n, dtype=np.uint8)
        bits[list(candidate_set)] = 1
        P = pack_bool_rows(bits[None, :])[0]
    C = np.zeros(n, dtype=np.int32)
    K = np.zeros(n, dtype=np.int32)
    rem = np.zeros(graph.words_per_row, dtype=np.uint64)
    Q = np.zeros(graph.words_per_row, dtype=np.uint64)
    cnt = int(_color_sort(graph.adj_words, P.copy(), C, K, rem, Q))
    return int(K[cnt - 1]) if cnt else 0
