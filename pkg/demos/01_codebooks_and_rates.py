#!/usr/bin/env python3
"""Tour of the codebook constructions and their data rates.

Walks through the four partition-based variants on small blocks, shows the
worked partition listings, and compares exact per-subcarrier rates with the
closed-form asymptotes and the rate-optimal block counts.
"""

import math

from spmofdm import (
    asymptotic_max_rate,
    asymptotic_rate,
    bell,
    build_index_codebook,
    optimal_k,
    optimal_k_ordered,
    ordered_bell,
    rate,
    stirling2,
)


def show_book(title, book):
    print(f"\n{title}: {len(book.patterns)} patterns")
    for i, p in enumerate(book.patterns):
        print(f"  {i:2d}  " + " ".join(str(x) for x in p))


def main():
    print("=== partitions of a 4-element block into 2 groups ===")
    print(f"count = S(4,2) = {stirling2(4, 2)}")
    show_book("unordered (canonical label vectors)", build_index_codebook("spm", 4, k=2))

    print("\n=== ordered partitions of a 3-element block, 2 groups ===")
    print(f"count = 2! S(3,2) = {2 * stirling2(3, 2)}")
    show_book("ordered (surjective label vectors)", build_index_codebook("ospm", 3, k=2))

    print("\n=== every partition of a 3-element block ===")
    print(f"count = bell(3) = {bell(3)}")
    show_book("full codebook", build_index_codebook("fspm", 3))

    print("\n=== ordered full codebooks just count ordered partitions ===")
    for n in (3, 4, 5, 6):
        print(f"  n={n}: {ordered_bell(n)} patterns")

    print("\n=== spectral efficiencies of the shipped configurations ===")
    rows = [
        ("spm",   dict(k=2, m=2), None),
        ("ospm",  dict(k=2, m=2), None),
        ("fspm",  dict(m=2), None),
        ("ofspm", dict(m=2), 32),
        ("fspm",  dict(m=4), None),
        ("mm",    dict(m=4), None),
        ("ofspm", dict(m=4), 32),
    ]
    for variant, kw, usable in rows:
        fig = rate(variant, 4, usable_patterns=usable, **kw)
        sel = f" (selected {usable})" if usable else ""
        print(f"  {variant:6s} m={kw['m']}  f1={fig.f1} f2={fig.f2} "
              f"rate={fig.rate:.2f} bits/subcarrier{sel}")

    print("\n=== exact rates approach the closed-form asymptote ===")
    target = asymptotic_rate("spm", 2, 2)
    for n in (8, 16, 24):
        raw = rate("spm", n, k=2, m=2).raw_rate
        print(f"  n={n:2d}: raw rate {raw:.4f} -> {target:.1f}")

    print("\n=== rate-maximizing block counts ===")
    for n in (4, 10, 20, 50):
        res = optimal_k(n)
        print(f"  n={n:2d}: best k = {res.argmax} (Lambert-W pair {res.candidates}), "
              f"ordered best k = {optimal_k_ordered(n)}")

    print("\n=== asymptotic ceilings at m=2 ===")
    for n in (8, 16, 32):
        print(f"  n={n:2d}: unordered max ~ {asymptotic_max_rate('spm', n, 2):.3f}, "
              f"ordered max ~ {asymptotic_max_rate('ospm', n, 2):.3f} bits/subcarrier")


if __name__ == "__main__":
    main()
