import json

import numpy as np
import pytest

from biblionet.corpus import (
    CorpusFormatError,
    Corpus,
    CouplingLink,
    PaperRecord,
    PeriodFilter,
    citation_neighborhood,
    coupling_links,
    drop_invalid,
    dump_corpus,
    filter_period,
    load_corpus,
    normalize_keywords,
    save_corpus,
    validate_corpus,
)
from oracles import naive_coupling, naive_neighborhood, random_corpus


def rec(pid, year=2005, **kw):
    return PaperRecord(id=pid, title=f"Paper {pid}", year=year, **kw)


def test_normalize_keywords_lowercases_trims_dedupes():
    out = normalize_keywords([" Urban ", "URBAN", "model", "", "  ", "Model"])
    assert out == ("urban", "model")


def test_normalize_keywords_preserves_first_seen_order():
    assert normalize_keywords(["zeta", "alpha", "Zeta"]) == ("zeta", "alpha")


def test_period_filter_rejects_inverted_bounds():
    with pytest.raises(ValueError):
        PeriodFilter(from_year=2010, to_year=2000)


def test_period_filter_single_year_contains():
    p = PeriodFilter(from_year=2005, to_year=2005)
    assert p.contains(2005)
    assert not p.contains(2004)
    assert not p.contains(2006)


def test_coupling_link_canonical_order_enforced():
    with pytest.raises(ValueError):
        CouplingLink("P2", "P1", 1)
    with pytest.raises(ValueError):
        CouplingLink("P1", "P1", 1)
    with pytest.raises(ValueError):
        CouplingLink("P1", "P2", 0)


def test_corpus_rejects_duplicate_ids():
    with pytest.raises(ValueError, match="P1"):
        Corpus([rec("P1"), rec("P1")])


def test_corpus_indexes_and_lookups():
    corpus = Corpus([
        rec("P1", keywords=("urban", "network")),
        rec("P2", year=2008, keywords=("urban",)),
    ])
    assert len(corpus) == 2
    assert "P1" in corpus and "P9" not in corpus
    assert corpus.keyword_index["urban"] == frozenset({"P1", "P2"})
    assert corpus.keyword_index["network"] == frozenset({"P1"})
    assert corpus.year_index[2005] == frozenset({"P1"})
    assert corpus.ids() == frozenset({"P1", "P2"})
    assert corpus.year_range() == (2005, 2008)


def test_empty_corpus_year_range_is_none():
    assert Corpus([]).year_range() is None


def test_load_two_line_fixture(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text(
        '{"id":"P1","title":"A","year":2001,"keywords":["Urban"]}\n'
        '{"id":"P2","title":"B","year":2002,"keywords":["urban","net"]}\n',
        encoding="utf-8",
    )
    corpus = load_corpus(str(path))
    assert len(corpus) == 2
    assert corpus.keyword_index["urban"] == frozenset({"P1", "P2"})
    assert corpus.keyword_index["net"] == frozenset({"P2"})


def test_load_duplicate_id_names_both_lines(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text(
        '{"id":"P1","title":"A","year":2001}\n'
        '{"id":"P2","title":"B","year":2002}\n'
        '{"id":"P1","title":"C","year":2003}\n',
        encoding="utf-8",
    )
    with pytest.raises(CorpusFormatError, match="line 3.*first seen on line 1") as exc:
        load_corpus(str(path))
    assert exc.value.line_no == 3


def test_load_blank_line_rejected(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text('{"id":"P1","title":"A","year":2001}\n\n', encoding="utf-8")
    with pytest.raises(CorpusFormatError, match="line 2"):
        load_corpus(str(path))


def test_load_invalid_json_names_line(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text('{"id":"P1","title":"A","year":2001}\n{broken\n', encoding="utf-8")
    with pytest.raises(CorpusFormatError, match="line 2"):
        load_corpus(str(path))


def test_load_unknown_field_rejected(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text('{"id":"P1","title":"A","year":2001,"extra":1}\n', encoding="utf-8")
    with pytest.raises(CorpusFormatError, match="extra"):
        load_corpus(str(path))


@pytest.mark.parametrize("missing", ["id", "title", "year"])
def test_load_missing_required_field(tmp_path, missing):
    obj = {"id": "P1", "title": "A", "year": 2001}
    del obj[missing]
    path = tmp_path / "c.jsonl"
    path.write_text(json.dumps(obj) + "\n", encoding="utf-8")
    with pytest.raises(CorpusFormatError, match=missing):
        load_corpus(str(path))


def test_load_year_must_be_integer_not_bool(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text('{"id":"P1","title":"A","year":true}\n', encoding="utf-8")
    with pytest.raises(CorpusFormatError, match="year"):
        load_corpus(str(path))
    path.write_text('{"id":"P1","title":"A","year":"2001"}\n', encoding="utf-8")
    with pytest.raises(CorpusFormatError, match="year"):
        load_corpus(str(path))


def test_load_out_of_range_year_is_accepted_then_reported():
    corpus = Corpus([rec("P1", year=1776)])
    report = validate_corpus(corpus)
    assert [v.rule for v in report] == ["year_range"]


def test_load_text_null_or_string(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text(
        '{"id":"P1","title":"A","year":2001,"text":null}\n'
        '{"id":"P2","title":"B","year":2002,"text":"hello"}\n',
        encoding="utf-8",
    )
    corpus = load_corpus(str(path))
    assert corpus.papers["P1"].text is None
    assert corpus.papers["P2"].text == "hello"
    path.write_text('{"id":"P3","title":"C","year":2003,"text":5}\n', encoding="utf-8")
    with pytest.raises(CorpusFormatError, match="text"):
        load_corpus(str(path))


def test_keywords_normalized_at_ingest(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text(
        '{"id":"P1","title":"A","year":2001,"keywords":[" URBAN ","urban","x"]}\n',
        encoding="utf-8",
    )
    corpus = load_corpus(str(path))
    assert corpus.papers["P1"].keywords == ("urban", "x")


def test_dump_load_round_trip_is_byte_identical(tmp_path):
    rng = np.random.default_rng(42)
    for trial in range(10):
        corpus = random_corpus(rng, n_docs=int(rng.integers(1, 15)), with_text=True)
        text = dump_corpus(corpus)
        path = tmp_path / f"c{trial}.jsonl"
        path.write_text(text, encoding="utf-8")
        assert dump_corpus(load_corpus(str(path))) == text


def test_save_corpus_writes_loadable_file(tmp_path, corpus3):
    path = tmp_path / "c.jsonl"
    save_corpus(corpus3, str(path))
    assert load_corpus(str(path)).ids() == corpus3.ids()


def test_validate_clean_corpus_is_empty(corpus3):
    assert validate_corpus(corpus3) == []


def test_validate_reports_each_rule():
    corpus = Corpus([
        rec("P1", year=1776, keywords=("Bad Case",)),
        rec("P2", affiliations=("France",)),
        rec("P3", studied=("fr",)),
        rec("P4", lang="xx"),
        rec("P5", origin="scraped"),
    ])
    report = validate_corpus(corpus)
    rules = {(v.record_id, v.rule) for v in report}
    assert ("P1", "year_range") in rules
    assert ("P1", "keywords_normalized") in rules
    assert ("P2", "country_code") in rules
    assert ("P3", "country_code") in rules
    assert ("P4", "lang") in rules
    assert ("P5", "origin") in rules


def test_validate_report_sorted_by_id_then_rule():
    corpus = Corpus([
        rec("P2", year=1776, lang="xx"),
        rec("P1", origin="scraped"),
    ])
    report = validate_corpus(corpus)
    keys = [(v.record_id, v.rule) for v in report]
    assert keys == sorted(keys)


def test_drop_invalid_removes_offending_records():
    corpus = Corpus([rec("P1", year=1776), rec("P2"), rec("P3", lang="xx")])
    report = validate_corpus(corpus)
    cleaned = drop_invalid(corpus, report)
    assert cleaned.ids() == frozenset({"P2"})
    assert validate_corpus(cleaned) == []


def test_filter_period_inclusive_bounds():
    corpus = Corpus([rec(f"P{y}", year=y) for y in (1999, 2000, 2005, 2012)])
    view = filter_period(corpus, PeriodFilter(from_year=2000, to_year=2005))
    assert view.ids() == frozenset({"P2000", "P2005"})


def test_filter_period_shares_record_objects(corpus3):
    view = filter_period(corpus3, PeriodFilter(from_year=2000, to_year=2005))
    assert view.papers["P1"] is corpus3.papers["P1"]
    assert len(corpus3) == 3


def test_filter_period_can_be_empty(corpus3):
    view = filter_period(corpus3, PeriodFilter(from_year=1950, to_year=1960))
    assert len(view) == 0


def test_neighborhood_example():
    corpus = Corpus([
        rec("P1", refs=("R1",)),
        rec("P2", refs=("P1",)),
        rec("P3", refs=("R1",)),
    ])
    hood = citation_neighborhood(corpus, ["P1"])
    assert hood.cited == frozenset()
    assert hood.citing == frozenset({"P2"})
    assert hood.coupled == frozenset({"P3"})


def test_neighborhood_cited_only_for_corpus_records():
    corpus = Corpus([rec("P1", refs=("P2", "R1")), rec("P2")])
    hood = citation_neighborhood(corpus, ["P1"])
    assert hood.cited == frozenset({"P2"})


def test_neighborhood_unknown_seed_rejected(corpus3):
    with pytest.raises(ValueError, match="P9"):
        citation_neighborhood(corpus3, ["P1", "P9"])


def test_neighborhood_excludes_seeds():
    corpus = Corpus([
        rec("P1", refs=("P2",)),
        rec("P2", refs=("P1",)),
    ])
    hood = citation_neighborhood(corpus, ["P1", "P2"])
    assert hood.cited == hood.citing == hood.coupled == frozenset()


def test_neighborhood_matches_set_comprehension_oracle():
    rng = np.random.default_rng(7)
    for _ in range(40):
        corpus = random_corpus(rng, n_docs=10)
        ids = sorted(corpus.papers)
        n_seeds = int(rng.integers(1, 4))
        seeds = [ids[int(i)] for i in rng.choice(len(ids), size=n_seeds, replace=False)]
        hood = citation_neighborhood(corpus, seeds)
        cited, citing, coupled = naive_neighborhood(corpus, seeds)
        assert hood.cited == cited
        assert hood.citing == citing
        assert hood.coupled == coupled


def test_coupling_micro(corpus3):
    links = coupling_links(corpus3)
    assert links == [CouplingLink("P2", "P3", 1)]


def test_coupling_weight_counts_shared_references():
    corpus = Corpus([
        rec("P1", refs=("R1", "R2", "R3")),
        rec("P2", refs=("R2", "R3", "R4")),
        rec("P3", refs=("R9",)),
    ])
    assert coupling_links(corpus) == [CouplingLink("P1", "P2", 2)]


def test_coupling_matches_pairwise_oracle():
    rng = np.random.default_rng(11)
    for _ in range(25):
        corpus = random_corpus(rng, n_docs=20)
        got = {(l.a, l.b): l.weight for l in coupling_links(corpus)}
        assert got == naive_coupling(corpus)


def test_coupling_output_sorted():
    rng = np.random.default_rng(3)
    corpus = random_corpus(rng, n_docs=25)
    links = coupling_links(corpus)
    assert links == sorted(links, key=lambda l: (l.a, l.b))
