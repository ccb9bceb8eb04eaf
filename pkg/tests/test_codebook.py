"""Codebook construction, bit mapping, expansion, distances, rates."""

import itertools
import math

import numpy as np
import pytest

from spmofdm.codebook import (
    IndexCodebook,
    asymptotic_max_rate,
    asymptotic_rate,
    bits_to_pattern,
    build_index_codebook,
    build_scheme,
    codebook_dmin,
    expand_codeword,
    export_codebook,
    export_codewords,
    pattern_count,
    pattern_to_bits,
    rate,
    restrict,
)
from spmofdm.combinatorics import bell, ordered_bell, stirling2
from spmofdm.constellations import psk_family


def partition_signature(labels):
    """Partition as a set of position-blocks (label values forgotten)."""
    blocks = {}
    for pos, lab in enumerate(labels):
        blocks.setdefault(lab, []).append(pos)
    return frozenset(frozenset(b) for b in blocks.values())


LOOKUP_BOOK = IndexCodebook(
    variant="spm", n=4, k=2,
    patterns=((0, 1, 1, 1), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)),
)


class TestBuild:
    def test_spm_4_2_worked_example(self):
        book = build_index_codebook("spm", 4, k=2)
        assert len(book.patterns) == 7
        assert (0, 1, 1, 1) in book.patterns
        assert (0, 0, 1, 1) in book.patterns
        # same seven partitions as the worked example, up to label names
        expected = [
            [0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0],
            [0, 0, 1, 1], [0, 1, 0, 1], [0, 1, 1, 0],
        ]
        assert {partition_signature(p) for p in book.patterns} == {
            partition_signature(p) for p in expected
        }

    def test_ofspm_4(self):
        book = build_index_codebook("ofspm", 4)
        assert len(book.patterns) == 75 == ordered_bell(4)

    def test_mm_3(self):
        book = build_index_codebook("mm", 3)
        assert set(book.patterns) == set(itertools.permutations(range(3)))

    def test_fspm_3_worked_example(self):
        book = build_index_codebook("fspm", 3)
        assert len(book.patterns) == 5 == bell(3)
        expected = [
            [0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0], [0, 1, 2],
        ]
        assert {partition_signature(p) for p in book.patterns} == {
            partition_signature(p) for p in expected
        }

    def test_counts(self):
        assert len(build_index_codebook("ospm", 4, k=2).patterns) == 14
        assert len(build_index_codebook("dm", 4, d=2).patterns) == 6
        assert len(build_index_codebook("gdm", 4).patterns) == 16
        assert len(build_index_codebook("ofdm-im", 4, n_active=2).patterns) == 6
        assert build_index_codebook("ofdm", 4).patterns == ((0, 0, 0, 0),)

    def test_count_formulas(self):
        for n in range(1, 9):
            assert pattern_count("fspm", n) == bell(n)
            assert pattern_count("ofspm", n) == ordered_bell(n)
            assert pattern_count("mm", n) == math.factorial(n)
            assert pattern_count("gdm", n) == 2**n

    def test_variant_aliases(self):
        assert build_index_codebook("MM-OFDM-IM", 3).variant == "mm"
        assert build_index_codebook("DM-OFDM-IM", 4, d=2).variant == "dm"

    def test_parameter_errors(self):
        with pytest.raises(ValueError):
            build_index_codebook("spm", 4)  # k missing
        with pytest.raises(ValueError):
            build_index_codebook("mm", 4, k=3)  # mm needs k = n
        with pytest.raises(ValueError):
            build_index_codebook("dm", 4, d=4)
        with pytest.raises(ValueError):
            build_index_codebook("ofdm-im", 4)


class TestContainments:
    def test_two_block_count_beats_combinations(self):
        # S(n,2) >= C(n,d), single exception (n,d) = (2,1)
        for n in range(2, 21):
            for d in range(1, n + 1):
                if (n, d) == (2, 1):
                    assert stirling2(n, 2) < math.comb(n, d)
                else:
                    assert stirling2(n, 2) >= math.comb(n, d)

    def test_dm_subset_of_ospm(self):
        for n in range(2, 7):
            ospm = set(build_index_codebook("ospm", n, k=2).patterns)
            for d in range(1, n):
                dm = set(build_index_codebook("dm", n, d=d).patterns)
                assert dm <= ospm

    def test_mm_equals_ospm_full(self):
        for n in range(2, 7):
            mm = set(build_index_codebook("mm", n).patterns)
            ospm = set(build_index_codebook("ospm", n, k=n).patterns)
            assert mm == ospm

    def test_mm_subset_of_ofspm(self):
        for n in range(2, 7):
            mm = set(build_index_codebook("mm", n).patterns)
            ofspm = set(build_index_codebook("ofspm", n).patterns)
            assert mm < ofspm

    def test_gdm_count_is_binomial_sum(self):
        for n in range(1, 21):
            assert pattern_count("gdm", n) == sum(math.comb(n, d) for d in range(n + 1))


class TestBitMapping:
    def test_first_mapped_row(self):
        assert bits_to_pattern(0b00, LOOKUP_BOOK) == (0, 1, 1, 1)

    def test_round_trip(self):
        for w in range(4):
            assert pattern_to_bits(bits_to_pattern(w, LOOKUP_BOOK), LOOKUP_BOOK) == w

    def test_selected_ospm_round_trip(self):
        scheme = build_scheme("ospm", 4, k=2, m=2, selection="alg1")
        book = scheme.book
        assert len(book.patterns) == 8 and book.selected
        for w in range(8):
            assert pattern_to_bits(bits_to_pattern(w, book), book) == w

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            bits_to_pattern(4, LOOKUP_BOOK)
        book = build_index_codebook("spm", 4, k=2)  # 7 patterns, f1 = 2
        late = book.patterns[5]
        with pytest.raises(ValueError):
            pattern_to_bits(late, book)


class TestExpansion:
    def test_first_points(self):
        fam = psk_family(2, 2, 4)
        got = expand_codeword((0, 1, 1, 1), 0, fam)
        expect = np.array([fam.members[0][0]] + [fam.members[1][0]] * 3)
        assert np.allclose(got, expect)

    def test_all_codewords_distinct(self):
        scheme = build_scheme("ospm", 4, k=2, m=2, selection="alg1")
        assert scheme.codewords.shape == (128, 4)
        assert len({tuple(np.round(r, 9)) for r in scheme.codewords}) == 128

    def test_unit_symbol_energy(self):
        scheme = build_scheme("ospm", 4, k=2, m=2, selection="alg1")
        assert np.allclose(np.abs(scheme.codewords) ** 2, 1.0)

    def test_symbols_come_from_assigned_member(self):
        scheme = build_scheme("spm", 4, k=2, m=2)
        fam, book = scheme.family, scheme.book
        for w in range(scheme.codewords.shape[0]):
            pat = book.patterns[w >> scheme.f2]
            for n, sym in enumerate(scheme.codewords[w]):
                assert np.min(np.abs(fam.members[pat[n]] - sym)) < 1e-12

    def test_errors(self):
        fam = psk_family(2, 2, 4)
        with pytest.raises(ValueError):
            expand_codeword((0, 1, 2), 0, fam)  # label 2 missing
        with pytest.raises(ValueError):
            expand_codeword((0, 1), 1 << 2, fam)  # word too wide


class TestDmin:
    def test_two_codeword_bpsk(self):
        book = np.array([[1.0 + 0j], [-1.0 + 0j]])
        dmin, dmin_rl, min_rank = codebook_dmin(book)
        assert dmin == pytest.approx(2.0)
        assert dmin_rl == pytest.approx(2.0)
        assert min_rank == 1

    def test_mm_4psk(self):
        scheme = build_scheme("mm", 4, m=4)
        dmin, dmin_rl, min_rank = codebook_dmin(scheme.codewords)
        assert dmin == pytest.approx(0.5518, abs=5e-4)
        assert dmin_rl == pytest.approx(1.4142, abs=5e-4)
        assert min_rank == 1

    def test_ofspm_qam_cosets(self):
        scheme = build_scheme("ofspm", 4, m=4, constellation="qam", selection="alg2")
        dmin, dmin_rl, min_rank = codebook_dmin(scheme.codewords)
        assert dmin == pytest.approx(0.8944, abs=5e-4)
        assert dmin_rl == pytest.approx(1.2649, abs=5e-4)
        assert min_rank == 1


class TestRate:
    @pytest.mark.parametrize(
        "variant,kwargs,expected",
        [
            ("spm", dict(k=2, m=2), 1.5),
            ("ospm", dict(k=2, m=2), 1.75),
            ("fspm", dict(m=2), 1.75),
            ("ofspm", dict(m=2, usable_patterns=32), 2.25),
            ("fspm", dict(m=4), 2.75),
            ("mm", dict(m=4), 3.0),
            ("ofspm", dict(m=4, usable_patterns=32), 3.25),
        ],
    )
    def test_reported_rates(self, variant, kwargs, expected):
        assert rate(variant, 4, **kwargs).rate == pytest.approx(expected)

    def test_ofdm_im_rate(self):
        fig = rate("ofdm-im", 4, m=4, n_active=2)
        assert fig.f1 == 2 and fig.f2 == 4
        assert fig.rate == pytest.approx(1.5)

    def test_raw_rate_uses_full_count(self):
        fig = rate("ofspm", 4, m=2, usable_patterns=32)
        assert fig.raw_rate == pytest.approx((math.log2(75) + 4) / 4)

    def test_raw_rate_approaches_asymptote(self):
        target = asymptotic_rate("spm", 2, 2)
        assert target == pytest.approx(2.0)
        gaps = [abs(rate("spm", n, k=2, m=2).raw_rate - target) for n in (8, 16, 24)]
        assert gaps[0] > gaps[1] > gaps[2]

    def test_max_rate_asymptotes(self):
        val = asymptotic_max_rate("ofspm", 16, 2)
        assert val == pytest.approx(math.log2(16) + 1 - math.log2(math.e * math.log(2)))
        for n in (8, 16):
            assert asymptotic_max_rate("fspm", n, 2) == pytest.approx(
                asymptotic_max_rate("spm", n, 2)
            )
            assert asymptotic_max_rate("ofspm", n, 2) == pytest.approx(
                asymptotic_max_rate("ospm", n, 2)
            )

    def test_index_bits_only_mode(self):
        fig = rate("mm", 4, m=1)
        assert fig.f2 == 0
        assert fig.raw_rate == pytest.approx(math.log2(24) / 4)


class TestRestrict:
    def test_selected_flag(self):
        book = build_index_codebook("ospm", 4, k=2)
        # patterns 0 and 4 are (0,0,0,1) and (0,0,1,1): unit distance
        sub = restrict(book, [0, 4])
        assert not sub.selected
        scheme = build_scheme("ospm", 4, k=2, m=2, selection="alg2")
        assert scheme.book.selected

    def test_padding_lex_smallest(self):
        book = build_index_codebook("fspm", 4)
        sub = restrict(book, [0, 1], pad_to=4)
        assert len(sub.patterns) == 4
        assert sub.patterns[0] == book.patterns[0]
        remaining = sorted(set(book.patterns) - set(book.patterns[:2]))
        assert set(sub.patterns[2:]) == set(remaining[:2])
        assert not sub.selected  # padding reintroduces unit-distance pairs

    def test_pad_too_small(self):
        book = build_index_codebook("fspm", 4)
        with pytest.raises(ValueError):
            restrict(book, range(5), pad_to=3)


class TestExport:
    def test_codebook_header(self):
        book = build_index_codebook("spm", 4, k=2)
        text = export_codebook(book, m=2)
        lines = text.splitlines()
        assert lines[0] == "spm 4 2 2 7"
        assert len(lines) == 8
        assert lines[1].split() == ["0", "0", "0", "1"]

    def test_codeword_export(self):
        scheme = build_scheme("spm", 4, k=2, m=2)
        text = export_codewords(scheme)
        lines = text.splitlines()
        assert lines[0].endswith(" 64")  # 4 patterns x 16 modulation words
        first = lines[1].split()
        assert len(first) == 4 + 8  # labels + re/im pairs
