"""Codebook selection as clique search on the Hamming graph.

Vertices are index patterns; two are adjacent when their Hamming distance
is at least two, which is exactly the condition for the corresponding
codeword difference to have rank >= 2. Any clique is therefore a codebook
whose index-error events all carry diversity order two.

Three solvers are provided: a rank-ordered brute-force k-clique scan that
streams candidate subsets through the combinatorial number system, the
fast greedy vertex-exclusion heuristic (repeatedly drop a minimum-degree
vertex until the remainder is complete), and an exact branch-and-bound
maximum-clique solver with a greedy-coloring bound used as a validation
oracle on small graphs.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from .combinatorics import floor_log2, unrank_combination

__all__ = [
    "HammingGraph",
    "CliqueResult",
    "BudgetExhausted",
    "hamming_distance",
    "build_hamming_graph",
    "graph_from_edge_list",
    "clique_upper_bound",
    "is_clique",
    "brute_force_k_clique",
    "vertex_exclusion",
    "exact_max_clique",
    "export_edge_list",
    "clique_result_csv_row",
]

# Tolerance when counting adjacency eigenvalues "not exceeding -1"; absorbs
# symmetric-eigensolver rounding on eigenvalues that are exactly -1.
EIG_TOL = 1e-9


class BudgetExhausted(RuntimeError):
    """Brute-force scan hit its subset budget before settling the question."""


@dataclass(frozen=True)
class HammingGraph:
    """Adjacency plus (when built from a codebook) the source patterns;
    graphs loaded from a plain edge list carry patterns=None."""

    patterns: tuple[tuple[int, ...], ...] | None
    adjacency: np.ndarray  # bool, symmetric, zero diagonal

    def __post_init__(self):
        self.adjacency.setflags(write=False)

    @property
    def order(self) -> int:
        return self.adjacency.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1).astype(np.int64)


@dataclass(frozen=True)
class CliqueResult:
    indices: tuple[int, ...]
    algorithm: str
    bound: int
    elapsed_s: float
    conclusive: bool = True  # False: budget ran out before an answer
    proven_optimal: bool | None = None  # exact solver only

    @property
    def size(self) -> int:
        return len(self.indices)


def hamming_distance(a, b) -> int:
    return sum(x != y for x, y in zip(a, b))


def build_hamming_graph(patterns) -> HammingGraph:
    """Adjacency under the distance >= 2 rule; vertex order = input order."""
    pats = tuple(tuple(p) for p in patterns)
    if len(pats) < 2:
        raise ValueError("need at least 2 patterns")
    n = len(pats[0])
    if any(len(p) != n for p in pats):
        raise ValueError("patterns must all have the same length")
    if len(set(pats)) != len(pats):
        raise ValueError("duplicate patterns")
    arr = np.array(pats)
    # row-chunked so the (L, L, n) broadcast never materializes whole
    L = len(pats)
    adj = np.empty((L, L), dtype=bool)
    step = max(1, (1 << 22) // (L * n))
    for lo in range(0, L, step):
        hi = min(L, lo + step)
        d = (arr[lo:hi, None, :] != arr[None, :, :]).sum(axis=2)
        adj[lo:hi] = d >= 2
    np.fill_diagonal(adj, False)
    return HammingGraph(patterns=pats, adjacency=adj)


def clique_upper_bound(graph: HammingGraph) -> int:
    """Eigenvalue bound on the clique number: one plus the number of
    adjacency eigenvalues that do not exceed -1."""
    lam = np.linalg.eigvalsh(graph.adjacency.astype(np.float64))
    return int((lam <= -1.0 + EIG_TOL).sum()) + 1


def is_clique(graph: HammingGraph, subset) -> bool:
    """True iff every pair in the subset is adjacent."""
    idx = list(subset)
    L = graph.order
    for i in idx:
        if not 0 <= i < L:
            raise IndexError(f"vertex index {i} out of range [0, {L})")
    if len(set(idx)) != len(idx):
        return False
    sub = graph.adjacency[np.ix_(idx, idx)]
    m = len(idx)
    return int(sub.sum()) == m * (m - 1)


def brute_force_k_clique(graph: HammingGraph, budget: int | None = None) -> CliqueResult:
    """Rank-ordered scan for a k-clique with k = 2^(floor(log2 bound) - kappa).

    Candidate k-subsets are generated directly from their lexicographic
    rank, so memory stays O(k) and disjoint rank ranges could be scanned
    independently; the winner is the lowest-rank success. When no k-clique
    exists the size is halved (kappa += 1) and the scan restarts; k = 1
    always succeeds, so termination is guaranteed. A budget caps the total
    number of subsets examined across all levels; hitting it yields an
    inconclusive result, which is distinct from a proven absence.
    """
    t0 = time.perf_counter()
    bound = clique_upper_bound(graph)
    L = graph.order
    adj = graph.adjacency
    examined = 0
    exp0 = floor_log2(bound)
    for kappa in range(exp0 + 1):
        k = 1 << (exp0 - kappa)
        if k > L:
            continue
        total = math.comb(L, k)
        need = k * (k - 1)
        for rank in range(total):
            if budget is not None and examined >= budget:
                return CliqueResult(
                    indices=(), algorithm="alg1", bound=bound,
                    elapsed_s=time.perf_counter() - t0, conclusive=False,
                )
            subset = unrank_combination(rank, L, k)
            examined += 1
            sub = adj[np.ix_(subset, subset)]
            if int(sub.sum()) == need:
                return CliqueResult(
                    indices=subset, algorithm="alg1", bound=bound,
                    elapsed_s=time.perf_counter() - t0,
                )
    raise AssertionError("unreachable: a single vertex is always a clique")


def vertex_exclusion(graph: HammingGraph) -> CliqueResult:
    """Drop a minimum-degree vertex (ties: lowest index) until the remaining
    vertices are pairwise adjacent. Degrees are updated incrementally.

    The eigenvalue bound is attached to the result for reporting but is not
    part of the algorithm, so it is computed outside the timer."""
    bound = clique_upper_bound(graph)
    t0 = time.perf_counter()
    adj = graph.adjacency
    L = graph.order
    active = np.ones(L, dtype=bool)
    deg = adj.sum(axis=1).astype(np.int64)
    remaining = L
    while True:
        idx = np.nonzero(active)[0]
        degs = deg[idx]
        if (degs == remaining - 1).all():
            break
        vmin = idx[int(np.argmin(degs))]  # argmin returns the first minimum
        active[vmin] = False
        deg[adj[vmin]] -= 1
        remaining -= 1
    indices = tuple(int(i) for i in np.nonzero(active)[0])
    return CliqueResult(
        indices=indices, algorithm="alg2", bound=bound,
        elapsed_s=time.perf_counter() - t0,
    )


def _color_sort(P: int, adj_masks):
    """Greedy coloring of the candidate set P (bitmask). Returns vertices in
    color order with their color numbers (1-based); the color number bounds
    the clique size reachable inside P."""
    colored = []
    colors = []
    color = 0
    rest = P
    while rest:
        color += 1
        avail = rest
        while avail:
            v = (avail & -avail).bit_length() - 1
            avail &= avail - 1
            colored.append(v)
            colors.append(color)
            rest &= ~(1 << v)
            avail &= ~adj_masks[v]
    return colored, colors


def exact_max_clique(graph: HammingGraph, time_budget: float = 60.0) -> CliqueResult:
    """Exact maximum clique by branch and bound with a greedy-coloring bound
    (bitmask implementation, practical to ~100 vertices). If the time
    budget runs out the best clique found so far is returned with
    proven_optimal=False."""
    bound = clique_upper_bound(graph)
    t0 = time.perf_counter()
    deadline = t0 + time_budget
    L = graph.order
    adj_masks = []
    for i in range(L):
        mask = 0
        for j in np.nonzero(graph.adjacency[i])[0]:
            mask |= 1 << int(j)
        adj_masks.append(mask)

    best: list[int] = []
    timed_out = False

    def expand(current: list[int], P: int):
        nonlocal best, timed_out
        if timed_out:
            return
        if time.perf_counter() > deadline:
            timed_out = True
            return
        verts, colors = _color_sort(P, adj_masks)
        for v, c in zip(reversed(verts), reversed(colors)):
            if len(current) + c <= len(best):
                return
            current.append(v)
            newP = P & adj_masks[v]
            if newP:
                expand(current, newP)
            elif len(current) > len(best):
                best = current.copy()
            current.pop()
            P &= ~(1 << v)

    expand([], (1 << L) - 1)
    return CliqueResult(
        indices=tuple(sorted(best)), algorithm="exact", bound=bound,
        elapsed_s=time.perf_counter() - t0, proven_optimal=not timed_out,
    )


def export_edge_list(graph: HammingGraph) -> str:
    """One 'l lhat' line per edge, 0-based, l < lhat."""
    ii, jj = np.nonzero(np.triu(graph.adjacency, k=1))
    return "\n".join(f"{i} {j}" for i, j in zip(ii, jj)) + "\n"


def graph_from_edge_list(text: str) -> HammingGraph:
    """Inverse of export_edge_list: one 'l lhat' pair per line, # comments
    allowed. Vertex count is one past the largest index seen."""
    edges = []
    top = -1
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 2:
            raise ValueError(f"edge list line {lineno}: expected 'i j', got {line!r}")
        i, j = int(parts[0]), int(parts[1])
        if i < 0 or j < 0 or i == j:
            raise ValueError(f"edge list line {lineno}: bad edge ({i}, {j})")
        edges.append((i, j))
        top = max(top, i, j)
    if top < 1:
        raise ValueError("edge list needs at least one edge")
    adj = np.zeros((top + 1, top + 1), dtype=bool)
    for i, j in edges:
        adj[i, j] = adj[j, i] = True
    return HammingGraph(patterns=None, adjacency=adj)


def clique_result_csv_row(res: CliqueResult) -> str:
    idx = " ".join(str(i) for i in res.indices)
    return f"{res.algorithm},{res.size},{res.bound},{res.elapsed_s * 1e3:.9g},{idx}"
