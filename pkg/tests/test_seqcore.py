"""Strand-level operations: validation, complement, parity, composition,
hairpins, assembly.

Expected values in this file were computed by hand (or with a separate
brute-force check inside the test) before the implementation was
written, and are frozen here.
"""

import random
from collections import Counter

import pytest

from seqforge.errors import (
    AlphabetMismatch,
    EmptySequence,
    InvalidResidue,
    WindowTooLarge,
    WrongAlphabet,
)
from seqforge.seqcore import (
    DNA,
    PROTEIN,
    RNA,
    assemble_fragments,
    complement,
    composition_windows,
    find_hairpins,
    parity_stats,
    reverse_complement,
    validate,
)


def dna(text, seq_id="seq"):
    return validate(text, DNA, seq_id=seq_id)


class TestValidate:
    def test_lowercase_normalized(self):
        s = validate("acgt", DNA)
        assert s.residues == "ACGT"
        assert s.alphabet is DNA

    def test_whitespace_stripped(self):
        s = validate("AC GT\nACGT\t", DNA)
        assert s.residues == "ACGTACGT"

    def test_u_rejected_in_dna(self):
        with pytest.raises(InvalidResidue) as err:
            validate("ACGU", DNA)
        assert err.value.position == 3
        assert err.value.char == "U"

    def test_strict_protein_rejects_punctuation(self):
        with pytest.raises(InvalidResidue) as err:
            validate("PheSer? no", PROTEIN)
        assert err.value.char == "?"

    def test_letters_only_filter_drops_digits_and_punctuation(self):
        s = validate("1 acgt 61 ac-gt", DNA, letters_only=True)
        assert s.residues == "ACGTACGT"

    def test_empty_input(self):
        with pytest.raises(EmptySequence):
            validate("  \n ", DNA)

    def test_lenient_collapses_ambiguity_codes(self):
        s = validate("ACGRYN", DNA, lenient=True)
        assert s.residues == "ACGNNN"

    def test_strict_rejects_ambiguity_codes(self):
        with pytest.raises(InvalidResidue):
            validate("ACGN", DNA)

    def test_lenient_protein_keeps_x(self):
        s = validate("XXGATXX", PROTEIN, lenient=True)
        assert s.residues == "XXGATXX"

    def test_residues_stay_in_alphabet(self):
        rng = random.Random(11)
        for _ in range(100):
            raw = "".join(rng.choice("ACGTacgt \n") for _ in range(30))
            try:
                s = validate(raw, DNA)
            except EmptySequence:
                continue
            assert set(s.residues) <= DNA.symbols
            assert len(s) >= 1


class TestComplement:
    def test_known_strand(self):
        # Two paired strands of a published duplex example.
        s = dna("ACGATGCCGTAGCATCGT")
        assert complement(s).residues == "TGCTACGGCATCGTAGCA"

    def test_simple(self):
        assert complement(dna("ACGT")).residues == "TGCA"

    def test_reverse_complement(self):
        s = dna("ACGATGCCGTAGCATCGT")
        assert reverse_complement(s).residues == "ACGATGCTACGGCATCGT"

    def test_involution(self):
        rng = random.Random(7)
        for _ in range(200):
            s = dna("".join(rng.choice("ACGT") for _ in range(rng.randint(1, 80))))
            assert reverse_complement(reverse_complement(s)) == s

    def test_wrong_alphabet(self):
        p = validate("MKV", PROTEIN)
        with pytest.raises(WrongAlphabet):
            complement(p)
        with pytest.raises(WrongAlphabet):
            reverse_complement(p)

    def test_wildcard_passes_through(self):
        s = validate("ACGN", DNA, lenient=True)
        assert complement(s).residues == "TGCN"


class TestParity:
    def test_known_strand_counts(self):
        st = parity_stats(dna("ACGATGCCGTAGCATCGT"))
        assert (st.a, st.t, st.c, st.g) == (4, 4, 5, 5)
        assert st.deviation_at == 0.0
        assert st.deviation_gc == 0.0

    def test_skewed(self):
        st = parity_stats(dna("AAAA"))
        assert st.deviation_at == 1.0
        assert st.deviation_gc == 0.0  # zero denominator

    def test_definition_holds(self):
        rng = random.Random(3)
        for _ in range(100):
            s = dna("".join(rng.choice("ACGT") for _ in range(rng.randint(1, 60))))
            st = parity_stats(s)
            c = Counter(s.residues)
            at = c["A"] + c["T"]
            gc = c["G"] + c["C"]
            assert st.deviation_at == (abs(c["A"] - c["T"]) / at if at else 0.0)
            assert st.deviation_gc == (abs(c["G"] - c["C"]) / gc if gc else 0.0)


class TestComposition:
    def test_window_enumeration(self):
        rep = composition_windows(dna("ACGTACGT"), window=4, step=2)
        assert rep.offsets == [0, 2, 4]

    def test_tiling_counts(self):
        rep = composition_windows(dna("AAAACCCC"), window=4)
        assert rep.counts == [{"A": 4}, {"C": 4}]
        assert rep.totals == {"A": 4, "C": 4}

    def test_gc_fraction(self):
        assert composition_windows(dna("GGCC"), window=4).gc_fraction() == 1.0
        assert composition_windows(dna("AATT"), window=2).gc_fraction() == 0.0

    def test_partial_window_only_on_request(self):
        rep = composition_windows(dna("ACGTA"), window=2, step=2)
        assert rep.offsets == [0, 2]
        rep = composition_windows(dna("ACGTA"), window=2, step=2, include_partial=True)
        assert rep.offsets == [0, 2, 4]
        assert rep.counts[-1] == {"A": 1}

    def test_window_too_large(self):
        with pytest.raises(WindowTooLarge):
            composition_windows(dna("ACGT"), window=5)

    def test_bad_parameters(self):
        with pytest.raises(ValueError):
            composition_windows(dna("ACGT"), window=0)
        with pytest.raises(ValueError):
            composition_windows(dna("ACGT"), window=2, step=0)

    def test_full_tiling_sums_to_totals(self):
        rng = random.Random(19)
        for _ in range(100):
            n = rng.randint(1, 90)
            s = dna("".join(rng.choice("ACGT") for _ in range(n)))
            w = rng.randint(1, n)
            rep = composition_windows(s, window=w, include_partial=True)
            summed = Counter()
            for counts in rep.counts:
                assert sum(counts.values()) in (w, n % w)
                summed.update(counts)
            assert dict(summed) == rep.totals == dict(Counter(s.residues))


class TestHairpins:
    def test_perfect_palindromic_stem(self):
        hp = find_hairpins(dna("GCGCAAAAGCGC"), min_stem=4, min_loop=3, max_loop=6)
        assert len(hp) == 1
        h = hp[0]
        assert h.stem == 4
        assert (h.loop_start, h.loop_end) == (4, 8)
        assert h.pairs == ((3, 8), (2, 9), (1, 10), (0, 11))
        assert h.start == 0 and h.end == 12

    def test_short_stem(self):
        hp = find_hairpins(dna("GCAAAGC"), min_stem=2, min_loop=3, max_loop=8)
        assert len(hp) == 1
        assert hp[0].stem == 2
        assert (hp[0].loop_start, hp[0].loop_end) == (2, 5)

    def test_no_self_pairing(self):
        assert find_hairpins(dna("AAAAAAAA")) == []

    def test_alternative_foldings_both_reported(self):
        # With a lower stem threshold the same fold-back region also
        # admits a 2-pair stem around the wider 6-base loop.
        hp = find_hairpins(dna("GCGCAAAAGCGC"), min_stem=2, min_loop=3, max_loop=6)
        stems = [(h.start, h.stem, h.loop_start, h.loop_end) for h in hp]
        assert (0, 4, 4, 8) in stems
        assert (0, 2, 2, 8) in stems
        # Ordered by start, then descending stem length.
        assert stems == sorted(stems, key=lambda x: (x[0], -x[1], x[2]))

    def test_pairs_are_watson_crick(self):
        rng = random.Random(23)
        comp = {"A": "T", "T": "A", "C": "G", "G": "C"}
        for _ in range(60):
            s = dna("".join(rng.choice("ACGT") for _ in range(rng.randint(8, 50))))
            for h in find_hairpins(s, min_stem=2, min_loop=3, max_loop=8):
                assert h.stem >= 2
                assert 3 <= h.loop_end - h.loop_start <= 8
                assert len(h.pairs) == h.stem
                for left, right in h.pairs:
                    assert comp[s.residues[left]] == s.residues[right]
                # nested: pairs widen strictly outward
                for (l1, r1), (l2, r2) in zip(h.pairs, h.pairs[1:]):
                    assert l2 == l1 - 1 and r2 == r1 + 1

    def test_wrong_alphabet(self):
        with pytest.raises(WrongAlphabet):
            find_hairpins(validate("MKV", PROTEIN))

    def test_rna_accepted(self):
        hp = find_hairpins(
            validate("GCGCAAAAGCGC", RNA), min_stem=4, min_loop=3, max_loop=6
        )
        assert len(hp) == 1


def frags(*texts):
    return [dna(t, seq_id=f"f{i}") for i, t in enumerate(texts)]


class TestAssembly:
    def test_simple_overlap(self):
        res = assemble_fragments(frags("ACGT", "CGTA"), min_overlap=3)
        assert len(res.contigs) == 1
        c = res.contigs[0]
        assert c.sequence.residues == "ACGTA"
        assert c.placements == ((0, "f0", 0), (1, "f1", 1))

    def test_disconnected(self):
        res = assemble_fragments(frags("ACGT", "GGGG"), min_overlap=3)
        assert sorted(c.sequence.residues for c in res.contigs) == ["ACGT", "GGGG"]

    def test_contained_fragment_absorbed(self):
        res = assemble_fragments(frags("ACGTACGT", "GTAC"), min_overlap=3)
        assert len(res.contigs) == 1
        c = res.contigs[0]
        assert c.sequence.residues == "ACGTACGT"
        assert (1, "f1", 2) in c.placements

    def test_duplicates_collapse(self):
        res = assemble_fragments(frags("AAA", "AAA"), min_overlap=2)
        assert len(res.contigs) == 1
        assert res.contigs[0].sequence.residues == "AAA"
        assert res.contigs[0].placements == ((0, "f0", 0), (1, "f1", 0))

    def test_tie_prefers_smallest_merged_string(self):
        # CA+AC and AC+CA both overlap by 1; ACA < CAC.
        res = assemble_fragments(frags("CA", "AC"), min_overlap=1)
        assert len(res.contigs) == 1
        assert res.contigs[0].sequence.residues == "ACA"

    def test_tie_at_longer_overlap(self):
        # Both orders overlap by 3; ACGTTTACG < TTTACGTTT.
        res = assemble_fragments(frags("TTTACG", "ACGTTT"), min_overlap=3)
        assert res.contigs[0].sequence.residues == "ACGTTTACG"

    def test_short_contained_fragment_respects_min_overlap(self):
        res = assemble_fragments(frags("ACGTACGT", "CG"), min_overlap=3)
        assert sorted(c.sequence.residues for c in res.contigs) == ["ACGT" "ACGT", "CG"]

    def test_superstring_property(self):
        rng = random.Random(41)
        for _ in range(50):
            source = "".join(rng.choice("ACGT") for _ in range(rng.randint(20, 60)))
            pieces = []
            i = 0
            while i < len(source):
                j = min(len(source), i + rng.randint(8, 14))
                pieces.append(source[i:j])
                if j == len(source):
                    break
                i = j - 4  # guarantee 4-base overlaps
            fs = frags(*pieces)
            res = assemble_fragments(fs, min_overlap=2)
            seen = []
            for c in res.contigs:
                for idx, fid, off in c.placements:
                    assert c.sequence.residues[off : off + len(fs[idx])] == fs[idx].residues
                    seen.append(idx)
            assert sorted(seen) == list(range(len(fs)))

    def test_determinism(self):
        fs = frags("ACGTAC", "GTACGT", "TTTACG", "ACGTTT")
        a = assemble_fragments(fs, min_overlap=2)
        b = assemble_fragments(fs, min_overlap=2)
        assert a == b

    def test_mixed_alphabets_rejected(self):
        with pytest.raises(AlphabetMismatch):
            assemble_fragments(
                [dna("ACGT"), validate("ACGU", RNA)], min_overlap=2
            )

    def test_empty_input(self):
        with pytest.raises(EmptySequence):
            assemble_fragments([], min_overlap=2)
