#!/usr/bin/env python3
"""Clique-based codebook selection on the Hamming graphs.

Builds the graphs for the ordered two-group books (n = 4, 6, 8) and the
ordered full books (n = 3..6), then runs the three solvers side by side:
rank-ordered brute force, vertex exclusion, and exact branch-and-bound
(where the graph is small enough). Selected codebooks keep every pattern
pair at Hamming distance two or more, which pins the index-error diversity
order at two.
"""

import time

from spmofdm import (
    brute_force_k_clique,
    build_hamming_graph,
    build_index_codebook,
    clique_upper_bound,
    exact_max_clique,
    is_clique,
    vertex_exclusion,
)


def run_case(label, patterns, brute=False, exact=False):
    graph = build_hamming_graph(patterns)
    t0 = time.perf_counter()
    bound = clique_upper_bound(graph)
    t_bound = time.perf_counter() - t0
    cells = [f"{label:10s} |V|={graph.order:5d} bound={bound:5d} ({t_bound:.2f}s)"]
    if brute:
        res = brute_force_k_clique(graph, budget=2_000_000)
        tag = f"{res.size}" if res.conclusive else "inconclusive"
        cells.append(f"brute={tag} ({res.elapsed_s:.3f}s)")
    res = vertex_exclusion(graph)
    assert is_clique(graph, res.indices)
    cells.append(f"exclusion={res.size} ({res.elapsed_s:.3f}s)")
    if exact:
        res = exact_max_clique(graph, time_budget=120.0)
        star = "" if res.proven_optimal else "*"
        cells.append(f"exact={res.size}{star} ({res.elapsed_s:.3f}s)")
    print("  ".join(cells))


def main():
    print("ordered two-group codebooks (k = 2):")
    for n in (4, 6, 8):
        pats = build_index_codebook("ospm", n, k=2).patterns
        run_case(f"n={n}", pats, brute=(n == 4), exact=True)

    print("\nordered full codebooks:")
    for n in (3, 4, 5, 6):
        pats = build_index_codebook("ofspm", n).patterns
        run_case(f"n={n}", pats, brute=(n == 3), exact=(n <= 4))

    print("\nnotes: brute force scans candidate subsets in rank order and is")
    print("only viable on the smallest graphs; vertex exclusion is greedy and")
    print("tie-break sensitive on the two largest graphs but always returns a")
    print("valid clique (verified above). '*' marks an unproven exact result.")


if __name__ == "__main__":
    main()
