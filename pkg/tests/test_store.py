import random

import pytest

from seqforge.errors import (
    CorruptStore,
    DuplicateAccession,
    QuerySyntaxError,
    StoreLocked,
    UnknownField,
)
from seqforge.formats import parse_fasta, parse_genbank
from seqforge.seqcore import DNA, PROTEIN, validate
from seqforge.store import (
    And,
    NeighborLink,
    Not,
    Or,
    Phrase,
    Record,
    Store,
    Term,
    Truncated,
    evaluate,
    open_store,
    parse_query,
    tokenize,
)

R1 = Record(
    accession="A1",
    definition="Heat shock proteins in yeast",
    organism="Saccharomyces cerevisiae",
    authors=("Crick,F.H.C.", "Watson,J.D."),
    date="1993 Jun",
    mesh_terms=("heat stress", "children"),
    publication_types=("review",),
    language="eng",
)
R2 = Record(
    accession="A2",
    definition="Multiple sclerosis and humidity",
    authors=("Smith,J.",),
    date="1987",
    mesh_terms=("multiple sclerosis",),
    language="eng",
)
R3 = Record(
    accession="A3",
    definition="Cold adaptation in anti-viral response",
    authors=("Jones,A.",),
    date="1993",
    mesh_terms=("cold stress",),
    language="fre",
)


@pytest.fixture
def corpus(tmp_path):
    st = open_store(tmp_path / "db")
    for r in (R1, R2, R3):
        st.ingest(r)
    return st


class TestTokenize:
    def test_splits_on_punctuation(self):
        assert tokenize("Crick,F.H.C.") == ["crick", "f", "h", "c"]

    def test_numbers_survive(self):
        assert tokenize("1993 Jun") == ["1993", "jun"]


class TestParse:
    def test_tagged_conjunction(self):
        got = parse_query("dna [mh] AND crick [au] AND 1993 [dp]")
        assert got == And(
            And(Term("dna", "mh"), Term("crick", "au")), Term("1993", "dp")
        )

    def test_adjacency_binds_tighter_than_operators(self):
        got = parse_query("(heat OR humidity) AND multiple sclerosis")
        assert got == And(
            Or(Term("heat"), Term("humidity")),
            And(Term("multiple"), Term("sclerosis")),
        )
        assert parse_query("x y OR z") == Or(
            And(Term("x"), Term("y")), Term("z")
        )

    def test_truncation(self):
        assert parse_query("child* [mh]") == Truncated("child", "mh")

    def test_quoted_phrase(self):
        assert parse_query('"multiple sclerosis" [mh]') == Phrase(
            ("multiple", "sclerosis"), "mh"
        )

    def test_not_is_unary(self):
        assert parse_query("a NOT b") == And(Term("a"), Not(Term("b")))
        assert parse_query("NOT NOT a") == Not(Not(Term("a")))

    def test_case_is_normalized_except_operators(self):
        assert parse_query("DNA [MH]") == Term("dna", "mh")
        # lowercase 'and' is an ordinary search word
        assert parse_query("salt and pepper") == And(
            And(Term("salt"), Term("and")), Term("pepper")
        )

    def test_unknown_field(self):
        with pytest.raises(UnknownField):
            parse_query("a [xx]")

    @pytest.mark.parametrize(
        "bad",
        [
            "",
            "   ",
            "(",
            "(a",
            "a )",
            "()",
            "a AND",
            "AND a",
            "a OR OR b",
            "[mh]",
            "a*b",
            "*",
            '"unclosed',
            "a [mh",
            "(a) [ti]",
            "NOT",
        ],
    )
    def test_syntax_errors(self, bad):
        with pytest.raises(QuerySyntaxError):
            parse_query(bad)


class TestEvaluate:
    def test_author_field(self, corpus):
        assert corpus.query("crick [au]") == ["A1"]

    def test_date_field(self, corpus):
        assert corpus.query("1993 [dp]") == ["A1", "A3"]

    def test_title_and_default_field(self, corpus):
        assert corpus.query("heat [ti] AND yeast") == ["A1"]
        assert corpus.query("saccharomyces") == ["A1"]  # organism is in all

    def test_truncation_matches_longer_token(self, corpus):
        assert corpus.query("child* [mh]") == ["A1"]
        assert corpus.query("chil* [mh]") == ["A1"]
        assert corpus.query("children [mh]") == ["A1"]

    def test_phrase_stays_inside_one_text(self, corpus):
        assert corpus.query('"multiple sclerosis" [mh]') == ["A2"]
        # heat stress / children are separate terms, no phrase across them
        assert corpus.query('"stress children" [mh]') == []

    def test_hyphenated_word_searchable_joined_and_split(self, corpus):
        assert corpus.query("antiviral") == ["A3"]
        assert corpus.query('"anti viral"') == ["A3"]

    def test_not_complements_corpus(self, corpus):
        assert corpus.query("NOT eng [la]") == ["A3"]
        assert corpus.query("stress [mh] NOT heat") == ["A3"]

    def test_worked_example(self, corpus):
        assert corpus.query("(heat OR humidity) AND multiple sclerosis") == ["A2"]

    def test_publication_type(self, corpus):
        assert corpus.query("review [pt]") == ["A1"]

    def test_de_morgan_and_adjacency_on_random_queries(self, corpus):
        rng = random.Random(53)
        vocab = [
            "heat", "stress", "yeast", "1993", "eng", "cold", "multiple",
            "sclerosis", "crick", "smith", "viral", "missing",
        ]
        fields = ["all", "ti", "au", "mh", "dp", "la"]
        entries = corpus._entries

        def leaf():
            word = rng.choice(vocab)
            f = rng.choice(fields)
            pick = rng.random()
            if pick < 0.2:
                return Truncated(word[:3], f)
            if pick < 0.3:
                return Phrase((word,), f)
            return Term(word, f)

        def tree(depth):
            if depth == 0 or rng.random() < 0.3:
                return leaf()
            op = rng.choice(("and", "or", "not"))
            if op == "not":
                return Not(tree(depth - 1))
            cls = And if op == "and" else Or
            return cls(tree(depth - 1), tree(depth - 1))

        for _ in range(200):
            a, b = tree(2), tree(2)
            lhs = evaluate(Not(And(a, b)), entries)
            rhs = evaluate(Or(Not(a), Not(b)), entries)
            assert lhs == rhs
            lhs = evaluate(Not(Or(a, b)), entries)
            rhs = evaluate(And(Not(a), Not(b)), entries)
            assert lhs == rhs

        for _ in range(50):
            w1, w2 = rng.choice(vocab), rng.choice(vocab)
            assert evaluate(parse_query(f"{w1} {w2}"), entries) == evaluate(
                parse_query(f"{w1} AND {w2}"), entries
            )


class TestIngest:
    def test_counts_new_records_only(self, tmp_path):
        st = open_store(tmp_path / "db")
        assert st.ingest(R1) == 1
        assert st.ingest(R1) == 0  # identical content, no-op
        assert len(st) == 1

    def test_same_accession_different_content_refused(self, tmp_path):
        st = open_store(tmp_path / "db")
        st.ingest(R1)
        changed = Record(accession="A1", definition="something else")
        with pytest.raises(DuplicateAccession):
            st.ingest(changed)

    def test_fasta_doc(self, tmp_path):
        st = open_store(tmp_path / "db")
        doc = parse_fasta(">s1 first\nACGTACGT\n>s2 second\nTTTTAAAA\n")
        assert st.ingest(doc) == 2
        record, seq = st.get("s1")
        assert record.definition == "first"
        assert seq.residues == "ACGTACGT"

    def test_genbank_record(self, tmp_path):
        text = (
            "LOCUS       TESTLOC                   24 bp    DNA     linear"
            "   PLN 01-JAN-1993\n"
            "DEFINITION  Heat tolerance locus from yeast.\n"
            "ACCESSION   GB1\n"
            "SOURCE      Saccharomyces cerevisiae\n"
            "  ORGANISM  Saccharomyces cerevisiae\n"
            "            Eukaryota; Fungi.\n"
            "REFERENCE   1  (bases 1 to 24)\n"
            "  AUTHORS   Crick,F.H.C. and Watson,J.D.\n"
            "  TITLE     Heat tolerance in yeast\n"
            "  JOURNAL   J Test 1:1-2(1993)\n"
            "ORIGIN\n"
            "        1 acgtacgtac gtacgtacgt acgt\n"
            "//\n"
        )
        (gb,) = parse_genbank(text)
        st = open_store(tmp_path / "db")
        assert st.ingest(gb) == 1
        record, seq = st.get("GB1")
        assert record.organism == "Saccharomyces cerevisiae"
        assert record.authors == ("Crick,F.H.C.", "Watson,J.D.")
        assert seq.residues == "ACGTACGTACGTACGTACGTACGT"
        assert st.query("crick [au]") == ["GB1"]

    def test_bare_sequence(self, tmp_path):
        st = open_store(tmp_path / "db")
        st.ingest(validate("MKWV", PROTEIN, seq_id="p1", description="tiny"))
        record, seq = st.get("p1")
        assert record.definition == "tiny"
        assert seq.residues == "MKWV"

    def test_get_missing(self, corpus):
        with pytest.raises(KeyError):
            corpus.get("nope")

    def test_accessions_sorted(self, corpus):
        assert corpus.accessions() == ["A1", "A2", "A3"]


class TestPersistence:
    def test_reopen_round_trips(self, tmp_path, corpus):
        again = open_store(corpus.path)
        assert again.accessions() == corpus.accessions()
        for acc in corpus.accessions():
            assert again.get(acc) == corpus.get(acc)

    def test_sequence_bytes_survive(self, tmp_path):
        st = open_store(tmp_path / "db")
        doc = parse_fasta(">x\nACGTACGTNNACGT\n", lenient=True)
        st.ingest(doc)
        assert open_store(st.path).sequence("x").residues == "ACGTACGTNNACGT"

    def test_identical_reingest_leaves_log_untouched(self, tmp_path, corpus):
        log = corpus.path / "records.log"
        before = log.read_bytes()
        assert corpus.ingest(R2) == 0
        assert log.read_bytes() == before

    def test_truncated_tail_is_discarded(self, corpus):
        log = corpus.path / "records.log"
        good = log.read_bytes()
        log.write_bytes(good + b"999\n{\"record\": {\"acces")
        again = open_store(corpus.path)
        assert len(again) == 3
        # the next write clears the debris before appending
        again.ingest(Record(accession="A4"))
        final = open_store(corpus.path)
        assert final.accessions() == ["A1", "A2", "A3", "A4"]

    def test_partial_length_line_is_discarded(self, corpus):
        log = corpus.path / "records.log"
        log.write_bytes(log.read_bytes() + b"17")
        assert len(open_store(corpus.path)) == 3

    def test_mid_file_damage_raises(self, corpus):
        log = corpus.path / "records.log"
        data = bytearray(log.read_bytes())
        nl = data.index(b"\n")
        data[nl + 1 : nl + 3] = b"@@"  # smash the first payload
        log.write_bytes(bytes(data))
        with pytest.raises(CorruptStore):
            open_store(corpus.path)

    def test_bad_length_header_raises(self, corpus):
        log = corpus.path / "records.log"
        data = bytearray(log.read_bytes())
        data[0:1] = b"x"
        log.write_bytes(bytes(data))
        with pytest.raises(CorruptStore):
            open_store(corpus.path)

    def test_writer_lock(self, corpus):
        lock = corpus.path / ".lock"
        lock.write_text("12345\n")
        with pytest.raises(StoreLocked):
            corpus.ingest(Record(accession="A9"))
        lock.unlink()
        assert corpus.ingest(Record(accession="A9")) == 1
        assert not lock.exists()  # released after the write

    def test_index_files_written(self, corpus):
        index = corpus.path / "index"
        ti = (index / "ti.tsv").read_text()
        assert "heat\tA1\n" in ti
        allf = (index / "all.tsv").read_text()
        assert "saccharomyces\tA1\n" in allf
        au = (index / "au.tsv").read_text()
        assert "crick\tA1\n" in au


class TestNeighbors:
    def seqs(self):
        return [
            validate("AAAAKRLVMNQWERTYHH", PROTEIN, seq_id="P1"),
            validate("CCCCKRLVMNQWERTYDD", PROTEIN, seq_id="P2"),
            validate("GGGGGGGGGGGG", PROTEIN, seq_id="P3"),
            validate("ACGTACGTACGTACGT", DNA, seq_id="D1"),
        ]

    @pytest.fixture
    def linked(self, tmp_path):
        st = open_store(tmp_path / "db")
        for s in self.seqs():
            st.ingest(s)
        st.build_neighbors()
        return st

    def test_links_are_symmetric(self, linked):
        assert linked.neighbors("P1") == [NeighborLink("P1", "P2", 24, "ktup3")]
        assert linked.neighbors("P2") == [NeighborLink("P2", "P1", 24, "ktup3")]

    def test_unrelated_and_cross_kind_excluded(self, linked):
        assert linked.neighbors("P3") == []
        assert linked.neighbors("D1") == []

    def test_links_persist(self, linked):
        again = open_store(linked.path)
        assert again.neighbors("P1") == linked.neighbors("P1")
        text = (linked.path / "neighbors.tsv").read_text()
        assert "P1\tP2\t24\tktup3\n" in text

    def test_neighbors_missing_accession(self, linked):
        with pytest.raises(KeyError):
            linked.neighbors("nope")

    def test_rebuild_replaces_links(self, linked):
        # a much higher threshold leaves no pair standing
        assert linked.build_neighbors(threshold=1000) == 0
        assert linked.neighbors("P1") == []
        assert (linked.path / "neighbors.tsv").read_text() == ""
