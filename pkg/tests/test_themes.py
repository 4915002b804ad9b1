from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from biblionet.corpus import Corpus, PaperRecord
from biblionet.text import tokenize
from biblionet.themes import (
    CloudEntry,
    Theme,
    ThemeModel,
    extract_themes,
    word_cloud,
)
from oracles import nmi, random_corpus


def doc(pid, text, year=2005):
    return PaperRecord(id=pid, title=pid, year=year, text=text)


def planted_corpus(n_docs=40, seed=0):
    """Two disjoint vocabularies, docs alternating between them."""
    vocab_a = ["river", "flood", "basin", "delta", "watershed"]
    vocab_b = ["plaza", "street", "mayor", "tramway", "facade"]
    rng = np.random.default_rng(seed)
    records = []
    for i in range(n_docs):
        vocab = vocab_a if i % 2 == 0 else vocab_b
        words = [vocab[int(j)] for j in rng.integers(0, len(vocab), size=12)]
        records.append(doc(f"D{i:03d}", " ".join(words)))
    planted = {f"D{i:03d}": i % 2 for i in range(n_docs)}
    return Corpus(records), planted


def test_theme_model_validates_structure():
    theme = Theme(id=0, doc_ids=("P1",), term_frequencies={}, centroid={})
    with pytest.raises(ValueError, match="expected 2 themes"):
        ThemeModel(k=2, seed=0, themes=(theme,), assignment={"P1": 0},
                   objective_trace=(1.0,))
    with pytest.raises(ValueError, match="ids must run"):
        ThemeModel(k=1, seed=0,
                   themes=(Theme(id=3, doc_ids=("P1",), term_frequencies={},
                                 centroid={}),),
                   assignment={"P1": 3}, objective_trace=(1.0,))
    with pytest.raises(ValueError, match="empty"):
        ThemeModel(k=1, seed=0,
                   themes=(Theme(id=0, doc_ids=(), term_frequencies={},
                                 centroid={}),),
                   assignment={}, objective_trace=(1.0,))
    with pytest.raises(ValueError, match="two themes"):
        ThemeModel(
            k=2, seed=0,
            themes=(
                Theme(id=0, doc_ids=("P1",), term_frequencies={}, centroid={}),
                Theme(id=1, doc_ids=("P1",), term_frequencies={}, centroid={}),
            ),
            assignment={"P1": 0}, objective_trace=(1.0,))
    with pytest.raises(ValueError, match="disagree"):
        ThemeModel(
            k=1, seed=0,
            themes=(Theme(id=0, doc_ids=("P1",), term_frequencies={},
                          centroid={}),),
            assignment={"P1": 0, "P2": 0}, objective_trace=(1.0,))


def test_extract_rejects_bad_k(corpus3):
    with pytest.raises(ValueError, match="k must be"):
        extract_themes(corpus3, k=0, seed=0)


def test_extract_requires_enough_texted_documents(corpus3):
    with pytest.raises(ValueError, match="need at least 4"):
        extract_themes(corpus3, k=4, seed=0)


def test_extract_ignores_blank_text():
    corpus = Corpus([
        doc("P1", "river flood"),
        doc("P2", "plaza street"),
        doc("P3", "   "),
        doc("P4", None),
    ])
    model = extract_themes(corpus, k=1, seed=0)
    assert set(model.assignment) == {"P1", "P2"}


def test_extract_rejects_corpus_with_no_usable_terms():
    corpus = Corpus([doc("P1", "river flood"), doc("P2", "river flood")])
    with pytest.raises(ValueError, match="usable terms"):
        extract_themes(corpus, k=1, seed=0)


def test_k1_aggregates_global_counts(corpus3):
    model = extract_themes(corpus3, k=1, seed=0)
    expected = Counter()
    for rec in corpus3:
        expected.update(tokenize(rec.text, rec.lang))
    assert model.themes[0].term_frequencies == dict(expected)
    assert model.themes[0].doc_ids == ("P1", "P2", "P3")
    assert model.n_docs == 3


def test_planted_split_recovered_for_any_seed():
    corpus, planted = planted_corpus()
    for seed in range(6):
        model = extract_themes(corpus, k=2, seed=seed)
        assert nmi(dict(model.assignment), planted) == pytest.approx(1.0, abs=1e-12)


def test_extract_deterministic_per_seed():
    corpus, _ = planted_corpus()
    a = extract_themes(corpus, k=3, seed=5)
    b = extract_themes(corpus, k=3, seed=5)
    assert a.assignment == b.assignment
    assert a.objective_trace == b.objective_trace
    assert a.themes == b.themes


def test_partition_invariants_on_random_corpora():
    rng = np.random.default_rng(83)
    for trial in range(15):
        corpus = random_corpus(rng, n_docs=12, with_text=True)
        k = int(rng.integers(1, 5))
        model = extract_themes(corpus, k=k, seed=trial)
        texted = [pid for pid in sorted(corpus.papers)
                  if corpus.papers[pid].text]
        members = [pid for theme in model.themes for pid in theme.doc_ids]
        assert sorted(members) == texted
        assert len(members) == len(set(members))
        assert all(theme.doc_count >= 1 for theme in model.themes)
        assert sum(theme.doc_count for theme in model.themes) == len(texted)
        for theme in model.themes:
            assert all(model.assignment[pid] == theme.id for pid in theme.doc_ids)


def test_objective_trace_monotone_non_decreasing():
    rng = np.random.default_rng(89)
    for trial in range(15):
        corpus = random_corpus(rng, n_docs=15, with_text=True)
        model = extract_themes(corpus, k=3, seed=trial)
        trace = model.objective_trace
        assert len(trace) >= 1
        assert all(b >= a - 1e-9 for a, b in zip(trace, trace[1:]))
        assert model.objective == trace[-1]


def test_centroids_unit_length():
    corpus, _ = planted_corpus()
    model = extract_themes(corpus, k=2, seed=1)
    for theme in model.themes:
        norm = sum(w * w for w in theme.centroid.values()) ** 0.5
        assert norm == pytest.approx(1.0, abs=1e-9)


def test_all_stopword_document_lands_in_theme_zero():
    corpus = Corpus([
        doc("P1", "river flood basin"),
        doc("P2", "plaza street mayor"),
        doc("P3", "the of and"),
    ])
    model = extract_themes(corpus, k=2, seed=0)
    assert model.assignment["P3"] == 0
    assert model.n_docs == 3


def test_default_k_is_ten():
    corpus = Corpus([
        doc(f"D{i:02d}", f"term{i} term{i} filler") for i in range(12)
    ])
    model = extract_themes(corpus, seed=0)
    assert model.k == 10


def test_cloud_sizes_exactly_proportional():
    model = ThemeModel(
        k=1, seed=0,
        themes=(Theme(id=0, doc_ids=("P1",),
                      term_frequencies={"urban": 10, "model": 5, "city": 2},
                      centroid={}),),
        assignment={"P1": 0}, objective_trace=(1.0,))
    cloud = word_cloud(model, 0)
    assert cloud.entries == (
        CloudEntry("urban", 10, Fraction(1)),
        CloudEntry("model", 5, Fraction(1, 2)),
        CloudEntry("city", 2, Fraction(1, 5)),
    )
    assert cloud.doc_count == 1
    assert cloud.color_rank == 1


def test_cloud_equal_frequencies_all_full_size():
    model = ThemeModel(
        k=1, seed=0,
        themes=(Theme(id=0, doc_ids=("P1",),
                      term_frequencies={"a": 3, "b": 3, "c": 3},
                      centroid={}),),
        assignment={"P1": 0}, objective_trace=(1.0,))
    cloud = word_cloud(model, 0)
    assert [e.relative_size for e in cloud.entries] == [Fraction(1)] * 3
    assert [e.term for e in cloud.entries] == ["a", "b", "c"]


def test_cloud_sorting_frequency_then_term():
    model = ThemeModel(
        k=1, seed=0,
        themes=(Theme(id=0, doc_ids=("P1",),
                      term_frequencies={"b": 2, "a": 2, "c": 5},
                      centroid={}),),
        assignment={"P1": 0}, objective_trace=(1.0,))
    cloud = word_cloud(model, 0)
    assert [e.term for e in cloud.entries] == ["c", "a", "b"]


def test_cloud_top_n_truncates():
    freqs = {f"t{i:02d}": 100 - i for i in range(30)}
    model = ThemeModel(
        k=1, seed=0,
        themes=(Theme(id=0, doc_ids=("P1",), term_frequencies=freqs,
                      centroid={}),),
        assignment={"P1": 0}, objective_trace=(1.0,))
    cloud = word_cloud(model, 0, top_n=5)
    assert [e.term for e in cloud.entries] == ["t00", "t01", "t02", "t03", "t04"]
    assert cloud.entries[0].relative_size == Fraction(1)


def test_cloud_ratios_equal_frequency_ratios_on_real_model():
    corpus, _ = planted_corpus()
    model = extract_themes(corpus, k=2, seed=3)
    for theme in model.themes:
        cloud = word_cloud(model, theme.id)
        assert cloud.entries[0].relative_size == Fraction(1)
        for e1 in cloud.entries:
            for e2 in cloud.entries:
                assert (e1.relative_size / e2.relative_size
                        == Fraction(e1.frequency, e2.frequency))


def test_cloud_color_rank_orders_by_doc_count():
    themes = (
        Theme(id=0, doc_ids=("P1",), term_frequencies={"a": 1}, centroid={}),
        Theme(id=1, doc_ids=("P2", "P3", "P4"), term_frequencies={"b": 1},
              centroid={}),
        Theme(id=2, doc_ids=("P5", "P6"), term_frequencies={"c": 1},
              centroid={}),
    )
    model = ThemeModel(
        k=3, seed=0, themes=themes,
        assignment={"P1": 0, "P2": 1, "P3": 1, "P4": 1, "P5": 2, "P6": 2},
        objective_trace=(1.0,))
    assert word_cloud(model, 1).color_rank == 1
    assert word_cloud(model, 2).color_rank == 2
    assert word_cloud(model, 0).color_rank == 3


def test_cloud_color_rank_tie_breaks_on_theme_id():
    themes = (
        Theme(id=0, doc_ids=("P1",), term_frequencies={"a": 1}, centroid={}),
        Theme(id=1, doc_ids=("P2",), term_frequencies={"b": 1}, centroid={}),
    )
    model = ThemeModel(
        k=2, seed=0, themes=themes,
        assignment={"P1": 0, "P2": 1}, objective_trace=(1.0,))
    assert word_cloud(model, 0).color_rank == 1
    assert word_cloud(model, 1).color_rank == 2


def test_cloud_rejects_unknown_theme(corpus3):
    model = extract_themes(corpus3, k=2, seed=0)
    with pytest.raises(ValueError, match="unknown theme id 2"):
        word_cloud(model, 2)
    with pytest.raises(ValueError, match="unknown theme id -1"):
        word_cloud(model, -1)
    with pytest.raises(ValueError, match="top_n"):
        word_cloud(model, 0, top_n=0)
