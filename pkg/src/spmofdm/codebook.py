"""Index codebooks and full codeword books for the modulation variants.

An index codebook is an ordered list of label vectors (patterns). The
variants differ only in which patterns they admit:

* spm      canonical partitions of [n] into k blocks        count S(n,k)
* ospm     surjective labelings [n] -> [k]                  count k! S(n,k)
* fspm     canonical partitions, any block count            count bell(n)
* ofspm    all surjective labelings, any block count        count ordered_bell(n)
* mm       permutation patterns (one block per subcarrier)  count n!
* dm       two-label patterns with exactly d zeros          count C(n,d)
* gdm      all two-label patterns                           count 2^n
* ofdm-im  active/null patterns, label 1 reserved for null  count C(n,n_active)
* ofdm     single all-zeros pattern (no index bits)         count 1

A transmitted block maps f = f1 + f2 bits: the top f1 bits pick one of the
first 2^f1 patterns, the rest Gray-modulate one symbol per subcarrier from
the constellation assigned to that subcarrier's label.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import combinatorics as comb
from .combinatorics import floor_log2
from .constellations import ConstellationFamily, psk_family, qam_family

__all__ = [
    "VARIANTS",
    "IndexCodebook",
    "Scheme",
    "RateFigures",
    "build_index_codebook",
    "pattern_count",
    "bits_to_pattern",
    "pattern_to_bits",
    "expand_codeword",
    "assemble_scheme",
    "build_scheme",
    "restrict",
    "codebook_dmin",
    "rate",
    "asymptotic_rate",
    "asymptotic_max_rate",
    "export_codebook",
    "export_codewords",
]

VARIANTS = ("spm", "ospm", "fspm", "ofspm", "mm", "dm", "gdm", "ofdm-im", "ofdm")

_ALIASES = {
    "mm-ofdm-im": "mm",
    "dm-ofdm-im": "dm",
    "gdm-ofdm-im": "gdm",
    "im": "ofdm-im",
}


def canonical_variant(variant: str) -> str:
    v = variant.strip().lower()
    v = _ALIASES.get(v, v)
    if v not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    return v


@dataclass(frozen=True)
class IndexCodebook:
    variant: str
    n: int
    k: int  # number of distinct labels any pattern may use
    patterns: tuple[tuple[int, ...], ...]
    selected: bool = False

    @property
    def f1(self) -> int:
        return floor_log2(len(self.patterns))


def _im_patterns(n, chosen_label, other_label, subset_size):
    """Patterns with chosen_label on each lex combination of subset_size
    positions and other_label elsewhere."""
    out = []
    for pos in itertools.combinations(range(n), subset_size):
        pat = [other_label] * n
        for p in pos:
            pat[p] = chosen_label
        out.append(tuple(pat))
    return out


def build_index_codebook(variant, n, k=None, d=None, n_active=None) -> IndexCodebook:
    """Construct the full (unselected) pattern list for a variant, in the
    deterministic enumeration order documented per variant."""
    v = canonical_variant(variant)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")

    if v == "spm":
        if k is None:
            raise ValueError("spm requires k")
        pats = tuple(comb.enumerate_partitions(n, k))
    elif v == "ospm":
        if k is None:
            raise ValueError("ospm requires k")
        pats = tuple(comb.enumerate_ordered_partitions(n, k))
    elif v == "fspm":
        k = n
        pats = tuple(
            p for kk in range(1, n + 1) for p in comb.enumerate_partitions(n, kk)
        )
    elif v == "ofspm":
        k = n
        pats = tuple(
            p for kk in range(1, n + 1) for p in comb.enumerate_ordered_partitions(n, kk)
        )
    elif v == "mm":
        if k is not None and k != n:
            raise ValueError(f"mm requires k = n, got k={k}, n={n}")
        k = n
        pats = tuple(itertools.permutations(range(n)))
    elif v == "dm":
        if d is None:
            d = n // 2
        if not 1 <= d <= n - 1:
            raise ValueError(f"dm requires 1 <= d <= n-1, got d={d}")
        k = 2
        pats = tuple(_im_patterns(n, 0, 1, d))
    elif v == "gdm":
        k = 2
        pats = tuple(
            tuple((w >> (n - 1 - i)) & 1 for i in range(n)) for w in range(1 << n)
        )
    elif v == "ofdm-im":
        if n_active is None:
            raise ValueError("ofdm-im requires n_active")
        if not 1 <= n_active <= n:
            raise ValueError(f"need 1 <= n_active <= n, got {n_active}")
        k = 2  # label 0 = data constellation, label 1 = reserved null
        pats = tuple(_im_patterns(n, 0, 1, n_active))
    else:  # ofdm
        k = 1
        pats = ((0,) * n,)

    return IndexCodebook(variant=v, n=n, k=k, patterns=pats)


def pattern_count(variant, n, k=None, d=None, n_active=None) -> int:
    """Exact size of the full pattern list, without enumerating it."""
    v = canonical_variant(variant)
    if v == "spm":
        return comb.stirling2(n, k)
    if v == "ospm":
        return math.factorial(k) * comb.stirling2(n, k)
    if v == "fspm":
        return comb.bell(n)
    if v == "ofspm":
        return comb.ordered_bell(n)
    if v == "mm":
        return math.factorial(n)
    if v == "dm":
        return math.comb(n, d if d is not None else n // 2)
    if v == "gdm":
        return 1 << n
    if v == "ofdm-im":
        return math.comb(n, n_active)
    return 1  # ofdm


def bits_to_pattern(bits: int, book: IndexCodebook) -> tuple[int, ...]:
    """Look up the pattern for an f1-bit index word."""
    f1 = book.f1
    if not 0 <= bits < (1 << f1):
        raise ValueError(f"index word {bits} out of range for f1={f1}")
    return book.patterns[bits]


def pattern_to_bits(pattern: tuple[int, ...], book: IndexCodebook) -> int:
    """Inverse lookup, defined on the first 2^f1 patterns only."""
    f1 = book.f1
    try:
        idx = book.patterns.index(tuple(pattern))
    except ValueError:
        raise ValueError(f"pattern {pattern} not in codebook") from None
    if idx >= (1 << f1):
        raise ValueError(f"pattern {pattern} outside the mapped range (2^{f1})")
    return idx


def _widths(pattern, family: ConstellationFamily):
    return [family.bits_per_symbol(lab) for lab in pattern]


def expand_codeword(pattern, mod_bits: int, family: ConstellationFamily) -> np.ndarray:
    """Symbols for one pattern and one f2-bit modulation word, consuming the
    word MSB-first across subcarriers."""
    if max(pattern) + 1 > family.K:
        raise ValueError(
            f"pattern uses label {max(pattern)} but family has only {family.K} members"
        )
    widths = _widths(pattern, family)
    f2 = sum(widths)
    if not 0 <= mod_bits < (1 << f2):
        raise ValueError(f"modulation word {mod_bits} out of range for f2={f2}")
    out = np.empty(len(pattern), dtype=complex)
    rem = f2
    for i, (lab, w) in enumerate(zip(pattern, widths)):
        rem -= w
        idx = (mod_bits >> rem) & ((1 << w) - 1)
        out[i] = family.members[lab][idx]
    return out


@dataclass(frozen=True)
class Scheme:
    """A transmittable configuration: codebook, family, and the full table
    of 2^f mapped codewords (row index == transmitted bit word)."""

    name: str
    book: IndexCodebook
    family: ConstellationFamily
    f1: int
    f2: int
    codewords: np.ndarray  # (2^f, n) complex

    def __post_init__(self):
        self.codewords.setflags(write=False)

    @property
    def f(self) -> int:
        return self.f1 + self.f2

    @property
    def n(self) -> int:
        return self.book.n

    @property
    def rate_bits_per_subcarrier(self) -> float:
        return self.f / self.book.n


def assemble_scheme(name: str, book: IndexCodebook, family: ConstellationFamily) -> Scheme:
    """Expand every (index word, modulation word) pair into its codeword."""
    f1 = book.f1
    f2s = {sum(_widths(p, family)) for p in book.patterns[: 1 << f1]}
    if len(f2s) != 1:
        raise ValueError("patterns disagree on modulation bit width")
    f2 = f2s.pop()
    rows = []
    for b1 in range(1 << f1):
        pat = book.patterns[b1]
        for b2 in range(1 << f2):
            rows.append(expand_codeword(pat, b2, family))
    return Scheme(
        name=name, book=book, family=family, f1=f1, f2=f2, codewords=np.array(rows)
    )


def restrict(book: IndexCodebook, indices, pad_to: int | None = None) -> IndexCodebook:
    """Codebook on a vertex subset (ascending original index), optionally
    padded with the lexicographically smallest unused patterns.

    The selected flag is set only when the result genuinely is a clique of
    power-of-two size under the Hamming >= 2 rule; padding normally breaks
    that (it reintroduces unit-distance pairs) and is flagged accordingly.
    """
    chosen = [book.patterns[i] for i in sorted(indices)]
    if pad_to is not None:
        if pad_to < len(chosen):
            raise ValueError(f"pad_to={pad_to} below selection size {len(chosen)}")
        rest = sorted(set(book.patterns) - set(chosen))
        chosen.extend(rest[: pad_to - len(chosen)])
        if len(chosen) < pad_to:
            raise ValueError(f"cannot pad to {pad_to}: only {len(chosen)} patterns exist")
    pats = tuple(chosen)
    pow2 = (len(pats) & (len(pats) - 1)) == 0
    clique = all(
        sum(x != y for x, y in zip(a, b)) >= 2
        for a, b in itertools.combinations(pats, 2)
    )
    return IndexCodebook(
        variant=book.variant, n=book.n, k=book.k, patterns=pats,
        selected=pow2 and clique,
    )


def codebook_dmin(codewords: np.ndarray) -> tuple[float, float, int]:
    """Distance profile of a full codeword book.

    Returns (d_min, d_min_rank_limited, min_rank): the global minimum
    Euclidean distance over all codeword pairs, the minimum distance among
    pairs whose difference has the minimum number of nonzero entries, and
    that minimum count (the rank of the diagonal difference matrix).
    """
    X = np.asarray(codewords)
    j = X.shape[0]
    if j < 2:
        raise ValueError("need at least 2 codewords")
    best = math.inf
    best_rl = math.inf
    min_rank = X.shape[1] + 1
    for i in range(j - 1):
        diff = X[i + 1 :] - X[i]
        d2 = np.abs(diff) ** 2
        dist2 = d2.sum(axis=1)
        ranks = (d2 > 1e-24).sum(axis=1)
        best = min(best, float(dist2.min()))
        r = int(ranks.min())
        if r < min_rank:
            min_rank = r
            best_rl = math.inf
        sel = ranks == min_rank
        if sel.any():
            best_rl = min(best_rl, float(dist2[sel].min()))
    return math.sqrt(best), math.sqrt(best_rl), min_rank


@dataclass(frozen=True)
class RateFigures:
    variant: str
    n: int
    f1: int
    f2: int
    count: int  # full pattern count (exact)

    @property
    def rate(self) -> float:
        """Bits per subcarrier with floor(log2) index mapping."""
        return (self.f1 + self.f2) / self.n

    @property
    def raw_rate(self) -> float:
        """Bits per subcarrier if every pattern could be used (unfloored)."""
        return (math.log2(self.count) + self.f2) / self.n


def rate(variant, n, k=None, m=2, d=None, n_active=None, usable_patterns=None) -> RateFigures:
    """Data-rate figures for a variant.

    usable_patterns, when given (e.g. the size of a clique-selected book),
    replaces the full count in the floored f1 term; raw_rate always uses
    the full count.
    """
    v = canonical_variant(variant)
    if m < 1 or (m & (m - 1)) != 0:
        raise ValueError(f"m must be a power of two, got {m}")
    count = pattern_count(v, n, k=k, d=d, n_active=n_active)
    usable = count if usable_patterns is None else usable_patterns
    if not 1 <= usable <= count:
        raise ValueError(f"usable_patterns must be in [1, {count}], got {usable}")
    bits_per_symbol = int(math.log2(m))
    f2 = (n_active if v == "ofdm-im" else n) * bits_per_symbol
    return RateFigures(variant=v, n=n, f1=floor_log2(usable), f2=f2, count=count)


_LOG2_E = math.log2(math.e)


def asymptotic_rate(variant, k, m) -> float:
    """Large-n limit of the per-subcarrier rate at fixed block count k."""
    v = canonical_variant(variant)
    if v not in ("spm", "ospm"):
        raise ValueError(f"fixed-k asymptote applies to spm/ospm, not {variant!r}")
    return math.log2(k * m)


def asymptotic_max_rate(variant, n, m) -> float:
    """Asymptotic rate at the rate-maximizing block count."""
    v = canonical_variant(variant)
    if v in ("spm", "fspm"):
        return math.log2(n / math.log(n)) + math.log2(m) - _LOG2_E
    if v in ("ospm", "ofspm"):
        return math.log2(n) + math.log2(m) - math.log2(math.e * math.log(2))
    raise ValueError(f"no asymptote defined for {variant!r}")


def _im_family(m: int, n: int, n_active: int) -> ConstellationFamily:
    """Active constellation boosted by sqrt(n/n_active) plus the null point,
    so per-block energy matches all-active schemes."""
    base = psk_family(m, 1, 1).members[0] * math.sqrt(n / n_active)
    return ConstellationFamily(
        members=(base, np.zeros(1, dtype=complex)), kind="im", M=m, K=2
    )


def _take(family: ConstellationFamily, k: int) -> ConstellationFamily:
    if k > family.K:
        raise ValueError(f"family has {family.K} members, need {k}")
    if k == family.K:
        return family
    return ConstellationFamily(members=family.members[:k], kind=family.kind,
                               M=family.M, K=k)


def build_scheme(
    variant,
    n,
    k=None,
    m=2,
    d=None,
    n_active=None,
    constellation="psk",
    rotation_slots=None,
    qam_parent=16,
    selection="none",
    pad_to=None,
    budget=None,
    time_budget=60.0,
    name=None,
) -> Scheme:
    """One-stop construction: codebook, optional clique selection, matching
    constellation family, full expansion.

    PSK rotation slots default to n (one slot per subcarrier, the
    multi-mode construction); pass rotation_slots explicitly for tighter
    packings.
    """
    from . import selection as sel  # local import; selection is graph-only

    v = canonical_variant(variant)
    book = build_index_codebook(v, n, k=k, d=d, n_active=n_active)

    if selection != "none":
        if v in ("ofdm",):
            raise ValueError("selection is meaningless for plain ofdm")
        graph = sel.build_hamming_graph(book.patterns)
        if selection == "alg1":
            res = sel.brute_force_k_clique(graph, budget=budget)
            if not res.conclusive:
                raise sel.BudgetExhausted(
                    f"brute-force selection exhausted its budget on {v}({n})"
                )
        elif selection == "alg2":
            res = sel.vertex_exclusion(graph)
        elif selection == "exact":
            res = sel.exact_max_clique(graph, time_budget=time_budget)
        else:
            raise ValueError(f"unknown selection {selection!r}")
        book = restrict(book, res.indices, pad_to=pad_to)
    elif pad_to is not None:
        raise ValueError("pad_to only applies together with selection")

    if v == "ofdm-im":
        family = _im_family(m, n, n_active)
    else:
        k_needed = max(max(p) for p in book.patterns) + 1
        if constellation == "psk":
            g = rotation_slots if rotation_slots is not None else max(n, k_needed)
            family = psk_family(m, k_needed, g)
        elif constellation == "qam":
            levels = max(1, math.ceil(math.log2(k_needed))) if k_needed > 1 else 0
            if qam_parent >> levels != m:
                raise ValueError(
                    f"{qam_parent}-QAM split {levels} times gives "
                    f"{qam_parent >> levels}-point members, not m={m}"
                )
            family = _take(qam_family(qam_parent, levels), k_needed)
        else:
            raise ValueError(f"unknown constellation {constellation!r}")

    if name is None:
        bits = [str(n)]
        if v in ("spm", "ospm"):
            bits.append(str(k))
        if v == "ofdm-im":
            bits.append(str(n_active))
        if v == "dm":
            bits.append(str(d if d is not None else n // 2))
        bits.append(str(m))
        name = f"{v}({','.join(bits)})"
    return assemble_scheme(name, book, family)


def export_codebook(book: IndexCodebook, m: int | None = None) -> str:
    """Header 'variant N K M count' then one line of labels per pattern."""
    head = f"{book.variant} {book.n} {book.k} {m if m is not None else '-'} {len(book.patterns)}"
    lines = [head]
    lines += [" ".join(str(x) for x in p) for p in book.patterns]
    return "\n".join(lines) + "\n"


def export_codewords(scheme: Scheme) -> str:
    """Like export_codebook but one line per mapped codeword, labels followed
    by 're im' pairs."""
    book, fam = scheme.book, scheme.family
    head = f"{book.variant} {book.n} {book.k} {fam.M} {scheme.codewords.shape[0]}"
    lines = [head]
    f2 = scheme.f2
    for w, row in enumerate(scheme.codewords):
        pat = book.patterns[w >> f2]
        sym = " ".join(f"{s.real:.12g} {s.imag:.12g}" for s in row)
        lines.append(" ".join(str(x) for x in pat) + " " + sym)
    return "\n".join(lines) + "\n"
