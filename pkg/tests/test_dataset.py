"""Corpus loading, writing and label statistics."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glossdom import (
    Corpus,
    CorpusFormatError,
    GlossRecord,
    LabelSpace,
    label_distribution,
    load_corpus,
    write_corpus,
)

HOSPITAL_GLOSS = "a health facility where patients receive treatment"


def write_tsv(path, rows, header="id\tgloss\tlabel"):
    lines = [header] + rows if header is not None else rows
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


class TestLoadTsv:
    def test_single_row(self, tmp_path):
        p = tmp_path / "c.tsv"
        write_tsv(p, [f"hospital\t{HOSPITAL_GLOSS}\tHealth and medicine"])
        corpus = load_corpus(p)
        assert len(corpus) == 1
        rec = corpus.records[0]
        assert rec.id == "hospital"
        assert rec.gloss == HOSPITAL_GLOSS
        assert rec.gold_label == "Health and medicine"

    def test_empty_file_is_empty_corpus(self, tmp_path):
        p = tmp_path / "c.tsv"
        p.write_text("", encoding="utf-8")
        assert len(load_corpus(p)) == 0

    def test_header_only_is_empty_corpus(self, tmp_path):
        p = tmp_path / "c.tsv"
        write_tsv(p, [])
        assert len(load_corpus(p)) == 0

    def test_unlabelled_rows(self, tmp_path):
        # Oracle: the file on disk has exactly 3 data lines, 1 with an
        # empty third column; re-derive both counts from the raw text.
        p = tmp_path / "c.tsv"
        rows = [
            "a\tfirst gloss\tMusic",
            "b\tsecond gloss\t",
            "c\tthird gloss\tMedia",
        ]
        write_tsv(p, rows)
        raw_lines = p.read_text(encoding="utf-8").strip().split("\n")[1:]
        expected_total = len(raw_lines)
        expected_unlabelled = sum(1 for ln in raw_lines if ln.split("\t")[2] == "")

        corpus = load_corpus(p)
        assert len(corpus) == expected_total == 3
        unlabelled = [r for r in corpus if r.gold_label is None]
        assert len(unlabelled) == expected_unlabelled == 1
        assert unlabelled[0].id == "b"
        assert len(corpus.labelled) == 2

    def test_bad_header_names_line(self, tmp_path):
        p = tmp_path / "c.tsv"
        write_tsv(p, ["a\tg\tMusic"], header="gloss\tid\tlabel")
        with pytest.raises(CorpusFormatError, match="line 1"):
            load_corpus(p)

    def test_wrong_column_count_names_line(self, tmp_path):
        p = tmp_path / "c.tsv"
        write_tsv(p, ["a\tok gloss\tMusic", "b\tonly two columns"])
        with pytest.raises(CorpusFormatError, match="line 3"):
            load_corpus(p)

    def test_empty_gloss_names_line_and_field(self, tmp_path):
        p = tmp_path / "c.tsv"
        write_tsv(p, ["a\t\tMusic"])
        with pytest.raises(CorpusFormatError, match="line 2.*'gloss'"):
            load_corpus(p)

    def test_empty_id_names_field(self, tmp_path):
        p = tmp_path / "c.tsv"
        write_tsv(p, ["\tsome gloss\tMusic"])
        with pytest.raises(CorpusFormatError, match="'id'"):
            load_corpus(p)

    def test_duplicate_id_names_id(self, tmp_path):
        p = tmp_path / "c.tsv"
        write_tsv(p, ["a\tone\tMusic", "a\ttwo\tMedia"])
        with pytest.raises(CorpusFormatError, match="'a'"):
            load_corpus(p)

    def test_crlf_tolerated(self, tmp_path):
        p = tmp_path / "c.tsv"
        p.write_text("id\tgloss\tlabel\r\na\tsome gloss\tMusic\r\n", encoding="utf-8")
        corpus = load_corpus(p)
        assert corpus.records[0].gloss == "some gloss"


class TestLoadJsonl:
    def test_basic(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text(
            '{"id": "a", "gloss": "first gloss", "label": "Music"}\n'
            '{"id": "b", "gloss": "second gloss", "label": null}\n'
            '{"id": "c", "gloss": "third gloss"}\n',
            encoding="utf-8",
        )
        corpus = load_corpus(p)
        assert [r.gold_label for r in corpus] == ["Music", None, None]

    def test_invalid_json_names_line(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text('{"id": "a", "gloss": "ok"}\n{oops\n', encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="line 2"):
            load_corpus(p)

    def test_missing_field_named(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text('{"id": "a"}\n', encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="'gloss'"):
            load_corpus(p)

    def test_non_string_label_rejected(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text('{"id": "a", "gloss": "g", "label": 3}\n', encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="label"):
            load_corpus(p)

    def test_duplicate_id(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text(
            '{"id": "a", "gloss": "one"}\n{"id": "a", "gloss": "two"}\n',
            encoding="utf-8",
        )
        with pytest.raises(CorpusFormatError, match="duplicate"):
            load_corpus(p)

    def test_unknown_suffix_needs_explicit_format(self, tmp_path):
        p = tmp_path / "c.dat"
        p.write_text('{"id": "a", "gloss": "g"}\n', encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="infer"):
            load_corpus(p)
        assert len(load_corpus(p, format="jsonl")) == 1


class TestWriteCorpus:
    def _corpus(self, glosses):
        recs = tuple(
            GlossRecord(id=f"r{i}", gloss=g, gold_label="Music" if i % 2 else None)
            for i, g in enumerate(glosses)
        )
        return Corpus(records=recs, name="t")

    def test_tsv_round_trip(self, tmp_path):
        corpus = self._corpus(["plain gloss", "another one"])
        p = tmp_path / "out.tsv"
        write_corpus(corpus, p)
        assert load_corpus(p, name="t") == corpus

    def test_jsonl_round_trip(self, tmp_path):
        corpus = self._corpus(["has\ttab", "has\nnewline", "plain"])
        p = tmp_path / "out.jsonl"
        write_corpus(corpus, p)
        assert load_corpus(p, name="t") == corpus

    def test_tsv_rejects_tab_in_gloss(self, tmp_path):
        corpus = self._corpus(["bad\tgloss"])
        with pytest.raises(CorpusFormatError, match="JSONL"):
            write_corpus(corpus, tmp_path / "out.tsv")

    def test_identical_bytes_identical_corpus(self, tmp_path):
        p = tmp_path / "c.tsv"
        write_tsv(p, ["a\tsome gloss\tMusic"])
        assert load_corpus(p) == load_corpus(p)


@settings(max_examples=50)
@given(
    st.lists(
        st.tuples(
            st.text(
                alphabet=st.characters(
                    blacklist_characters="\t\n\r",
                    blacklist_categories=("Cs",),
                    min_codepoint=32,
                ),
                min_size=1,
            ).filter(lambda s: s.strip()),
            st.sampled_from(["Music", "Media", None]),
        ),
        max_size=8,
    )
)
def test_round_trip_property(tmp_path_factory, items):
    recs = tuple(
        GlossRecord(id=f"r{i}", gloss=g, gold_label=lbl) for i, (g, lbl) in enumerate(items)
    )
    corpus = Corpus(records=recs, name="prop")
    base = tmp_path_factory.mktemp("rt")
    for fmt in ("tsv", "jsonl"):
        p = base / f"c.{fmt}"
        write_corpus(corpus, p)
        assert load_corpus(p, name="prop") == corpus


class TestRecordValidation:
    def test_empty_gloss_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            GlossRecord(id="a", gloss="   ")

    def test_duplicate_ids_rejected(self):
        recs = (GlossRecord(id="a", gloss="x"), GlossRecord(id="a", gloss="y"))
        with pytest.raises(ValueError, match="duplicate"):
            Corpus(records=recs)


class TestLabelDistribution:
    SPACE = LabelSpace.from_names(["Music", "Media", "Geology"], name="toy")

    def _corpus(self, golds):
        recs = tuple(
            GlossRecord(id=f"r{i}", gloss=f"gloss {i}", gold_label=g)
            for i, g in enumerate(golds)
        )
        return Corpus(records=recs)

    def test_worked_example(self):
        dist = label_distribution(self._corpus(["Music", "Music", "Media"]), self.SPACE)
        assert dist.counts == {"Music": 2, "Media": 1, "Geology": 0}
        assert dist.total == 3

    def test_unlabelled_corpus_all_zero(self):
        dist = label_distribution(self._corpus([None, None]), self.SPACE)
        assert dist.counts == {"Music": 0, "Media": 0, "Geology": 0}
        assert dist.total == 0

    def test_unknown_gold_label_names_record(self):
        with pytest.raises(CorpusFormatError, match="r1.*'Sport'"):
            label_distribution(self._corpus(["Music", "Sport"]), self.SPACE)

    def test_random_corpus_matches_tally_oracle(self):
        # Oracle: an independent single-pass tally over the same records.
        rng = random.Random(7)
        golds = [rng.choice(["Music", "Media", "Geology", None]) for _ in range(50)]
        corpus = self._corpus(golds)

        expected = {"Music": 0, "Media": 0, "Geology": 0}
        for g in golds:
            if g is not None:
                expected[g] += 1

        dist = label_distribution(corpus, self.SPACE)
        assert dist.counts == expected
        assert dist.total == sum(expected.values())
        assert dist.total <= len(corpus)

    def test_total_never_exceeds_corpus_size(self):
        rng = random.Random(11)
        for trial in range(10):
            golds = [rng.choice(["Music", None]) for _ in range(rng.randrange(20))]
            corpus = self._corpus(golds)
            dist = label_distribution(corpus, self.SPACE)
            assert dist.total <= len(corpus)
