import numpy as np
import pytest
from scipy.cluster.hierarchy import linkage

from biblionet.corpus import Corpus, PaperRecord, PeriodFilter
from biblionet.geo import (
    ContingencyTable,
    LABEL_NEUTRAL,
    LABEL_OVER,
    LABEL_UNDER,
    ROLE_AFFILIATION,
    ROLE_STUDIED,
    build_contingency,
    classify_countries,
    country_activity,
    effective_studied,
    representation_residuals,
    residual_label,
    themes_to_lexicons,
    trim_contingency,
)
from biblionet.text import Gazetteer, Lexicon, lexicon_counts, tokenize
from biblionet.themes import extract_themes, word_cloud
from oracles import min_variance_2partition, random_corpus


def rec(pid, year=2005, **kw):
    return PaperRecord(id=pid, title=f"Paper {pid}", year=year, **kw)


LEX2 = [
    Lexicon("water", frozenset({"river", "flood", "basin"})),
    Lexicon("city", frozenset({"plaza", "street", "mayor"})),
]


def table(rows, cols, counts):
    return ContingencyTable(rows=tuple(rows), cols=tuple(cols),
                            n=np.asarray(counts, dtype=np.int64))


def test_activity_micro_window(corpus3):
    act = country_activity(corpus3, PeriodFilter(from_year=2000, to_year=2005))
    assert dict(act.authored) == {"FR": 2, "US": 1}
    assert dict(act.studied) == {"DE": 1, "FR": 1}
    assert act.countries() == ["DE", "FR", "US"]


def test_activity_micro_full_range(corpus3):
    act = country_activity(corpus3, PeriodFilter(from_year=2000, to_year=2012))
    assert dict(act.authored) == {"BR": 1, "FR": 2, "US": 1}
    assert dict(act.studied) == {"BR": 1, "DE": 1, "FR": 1}


def test_activity_counts_repeated_country_once():
    corpus = Corpus([rec("P1", affiliations=("FR", "FR", "US"))])
    act = country_activity(corpus, PeriodFilter(from_year=2000, to_year=2010))
    assert dict(act.authored) == {"FR": 1, "US": 1}


def test_activity_gazetteer_fills_missing_studied():
    gaz = Gazetteer(aliases={("france",): "FR", ("brazil",): "BR"})
    corpus = Corpus([
        rec("P1", text="A comparison of France and Brazil."),
        rec("P2", studied=("DE",), text="Also mentions France."),
    ])
    period = PeriodFilter(from_year=2000, to_year=2010)
    act = country_activity(corpus, period, gazetteer=gaz)
    assert dict(act.studied) == {"BR": 1, "DE": 1, "FR": 1}
    act_bare = country_activity(corpus, period)
    assert dict(act_bare.studied) == {"DE": 1}


def test_effective_studied_explicit_metadata_wins():
    gaz = Gazetteer(aliases={("france",): "FR"})
    r = rec("P1", studied=("DE",), text="france france france")
    assert effective_studied(r, gaz) == ("DE",)
    assert effective_studied(rec("P2", text="france"), gaz) == ("FR",)
    assert effective_studied(rec("P3", text="france"), None) == ()


def test_contingency_shape_validation():
    with pytest.raises(ValueError, match="shape"):
        table(["FR"], ["a", "b"], [[1]])
    with pytest.raises(ValueError, match="non-negative"):
        table(["FR"], ["a"], [[-1]])


def test_contingency_totals():
    t = table(["FR", "US"], ["a", "b"], [[1, 2], [3, 4]])
    assert t.row_totals.tolist() == [3, 7]
    assert t.col_totals.tolist() == [4, 6]
    assert t.grand_total == 10


def test_build_contingency_micro(corpus3):
    lexicons = [
        Lexicon("nets", frozenset({"networks", "network"})),
        Lexicon("models", frozenset({"models", "model"})),
    ]
    t = build_contingency(corpus3, lexicons, ROLE_STUDIED)
    assert t.rows == ("BR", "DE", "FR")
    assert t.cols == ("nets", "models")
    # P1 (DE): "networks" once; P2 (FR): "models" once; P3 (BR): "models" once.
    assert t.n.tolist() == [[0, 1], [1, 0], [0, 1]]


def test_build_contingency_rejects_bad_role_and_empty_lexicons(corpus3):
    with pytest.raises(ValueError, match="role"):
        build_contingency(corpus3, LEX2, "funder")
    with pytest.raises(ValueError, match="lexicon"):
        build_contingency(corpus3, [], ROLE_STUDIED)


def test_build_contingency_requires_some_text():
    corpus = Corpus([rec("P1", studied=("FR",))])
    with pytest.raises(ValueError, match="has text"):
        build_contingency(corpus, LEX2, ROLE_STUDIED)


def test_build_contingency_multi_country_full_attribution():
    corpus = Corpus([rec("P1", studied=("FR", "US"), text="river flood plaza")])
    t = build_contingency(corpus, LEX2, ROLE_STUDIED)
    assert t.rows == ("FR", "US")
    assert t.n.tolist() == [[2, 1], [2, 1]]


def test_build_contingency_matches_nested_loop_oracle():
    rng = np.random.default_rng(17)
    for _ in range(20):
        corpus = random_corpus(rng, n_docs=8, with_text=True)
        for role in (ROLE_STUDIED, ROLE_AFFILIATION):
            t = build_contingency(corpus, LEX2, role)
            expected = {}
            for r in corpus:
                if r.text is None:
                    continue
                codes = set(r.affiliations if role == ROLE_AFFILIATION else r.studied)
                counts = lexicon_counts(tokenize(r.text, r.lang), LEX2)
                for code in codes:
                    for name, c in counts.items():
                        expected[(code, name)] = expected.get((code, name), 0) + c
            for i, code in enumerate(t.rows):
                for j, name in enumerate(t.cols):
                    assert t.n[i, j] == expected.get((code, name), 0)


def test_build_contingency_independent_of_record_order():
    rng = np.random.default_rng(23)
    corpus = random_corpus(rng, n_docs=10, with_text=True)
    shuffled = Corpus(reversed(list(corpus)))
    a = build_contingency(corpus, LEX2, ROLE_STUDIED)
    b = build_contingency(shuffled, LEX2, ROLE_STUDIED)
    assert a.rows == b.rows and a.cols == b.cols
    assert np.array_equal(a.n, b.n)


def test_residuals_zero_under_independence():
    rng = np.random.default_rng(29)
    for _ in range(25):
        a = rng.integers(1, 10, size=int(rng.integers(2, 6)))
        b = rng.integers(1, 10, size=int(rng.integers(2, 6)))
        t = table([f"C{i}" for i in range(len(a))],
                  [f"L{j}" for j in range(len(b))],
                  np.outer(a, b))
        assert np.abs(representation_residuals(t)).max() < 1e-9


def test_residuals_diagonal_example():
    t = table(["FR", "US"], ["a", "b"], [[20, 0], [0, 20]])
    r = representation_residuals(t)
    assert r[0, 0] == pytest.approx(3.162277660168379, abs=1e-12)
    assert r[0, 1] == pytest.approx(-3.162277660168379, abs=1e-12)
    assert [[residual_label(v) for v in row] for row in r] == [
        [LABEL_OVER, LABEL_UNDER],
        [LABEL_UNDER, LABEL_OVER],
    ]


def test_residuals_reject_degenerate_margins():
    with pytest.raises(ValueError, match="row 'US'"):
        representation_residuals(table(["FR", "US"], ["a"], [[3], [0]]))
    with pytest.raises(ValueError, match="column 'b'"):
        representation_residuals(table(["FR"], ["a", "b"], [[3, 0]]))
    with pytest.raises(ValueError, match="grand total"):
        representation_residuals(table(["FR"], ["a"], [[0]]))


def test_residual_label_threshold_is_strict():
    assert residual_label(2.0) == LABEL_NEUTRAL
    assert residual_label(-2.0) == LABEL_NEUTRAL
    assert residual_label(2.0000001) == LABEL_OVER
    assert residual_label(-2.0000001) == LABEL_UNDER
    assert residual_label(0.0) == LABEL_NEUTRAL


FIXTURE_4 = table(
    ["AA", "BB", "CC", "DD"],
    ["water", "city"],
    [[10, 0], [20, 0], [0, 5], [0, 15]],
)


def test_classification_two_obvious_groups():
    got = classify_countries(FIXTURE_4, k=2)
    assert got.assignment == {"AA": 1, "BB": 1, "CC": 2, "DD": 2}
    assert got.countries == ("AA", "BB", "CC", "DD")
    assert got.merges == ((0, 1, 0.0), (2, 3, 0.0), (4, 5, 2.0))
    assert got.k == 2
    assert got.excluded == ()


def test_classification_matches_exhaustive_2_partition():
    profiles = FIXTURE_4.n.astype(float)
    profiles /= profiles.sum(axis=1, keepdims=True)
    (left, right), _cost = min_variance_2partition(profiles)
    got = classify_countries(FIXTURE_4, k=2)
    classes = {}
    for code, cls in got.assignment.items():
        classes.setdefault(cls, set()).add(FIXTURE_4.rows.index(code))
    assert {frozenset(s) for s in classes.values()} == {left, right}


def test_classification_k_extremes():
    all_one = classify_countries(FIXTURE_4, k=1)
    assert set(all_one.assignment.values()) == {1}
    singletons = classify_countries(FIXTURE_4, k=4)
    assert singletons.assignment == {"AA": 1, "BB": 2, "CC": 3, "DD": 4}


def test_classification_k_out_of_range():
    with pytest.raises(ValueError, match="k must be"):
        classify_countries(FIXTURE_4, k=0)
    with pytest.raises(ValueError, match="k must be"):
        classify_countries(FIXTURE_4, k=5)


def test_classification_excludes_zero_profiles():
    t = table(["AA", "BB", "ZZ"], ["a", "b"], [[5, 0], [0, 5], [0, 0]])
    got = classify_countries(t, k=2)
    assert got.excluded == ("ZZ",)
    assert got.countries == ("AA", "BB")
    assert got.assignment == {"AA": 1, "BB": 2}


def test_classification_all_zero_rows_rejected():
    t = table(["AA"], ["a"], [[0]])
    with pytest.raises(ValueError, match="non-zero"):
        classify_countries(t, k=1)


def test_classification_row_scaling_invariant():
    scaled = table(
        ["AA", "BB", "CC", "DD"],
        ["water", "city"],
        (FIXTURE_4.n * np.array([[7], [1], [13], [3]])),
    )
    a = classify_countries(FIXTURE_4, k=2)
    b = classify_countries(scaled, k=2)
    assert a.assignment == b.assignment
    assert a.merges == b.merges


def test_classification_heights_match_scipy_ward():
    rng = np.random.default_rng(31)
    for _ in range(30):
        n_rows = int(rng.integers(3, 9))
        n_cols = int(rng.integers(2, 5))
        counts = rng.integers(1, 30, size=(n_rows, n_cols))
        t = table([f"C{i:02d}" for i in range(n_rows)],
                  [f"L{j}" for j in range(n_cols)], counts)
        got = classify_countries(t, k=1)
        profiles = counts / counts.sum(axis=1, keepdims=True)
        expected = linkage(profiles, method="ward")[:, 2]
        assert np.allclose(sorted(got.heights), sorted(expected), atol=1e-9)


def test_classification_heights_monotone():
    rng = np.random.default_rng(37)
    for _ in range(50):
        n_rows = int(rng.integers(2, 10))
        counts = rng.integers(0, 20, size=(n_rows, 3))
        counts[:, 0] += 1
        t = table([f"C{i:02d}" for i in range(n_rows)], ["a", "b", "c"], counts)
        heights = classify_countries(t, k=1).heights
        assert all(a <= b + 1e-12 for a, b in zip(heights, heights[1:]))


def test_classification_deterministic_under_ties():
    t = table(["AA", "BB", "CC", "DD"], ["a", "b"],
              [[1, 0], [1, 0], [0, 1], [0, 1]])
    runs = {classify_countries(t, k=2).merges for _ in range(3)}
    assert len(runs) == 1
    merges = next(iter(runs))
    assert merges[0][:2] == (0, 1)
    assert merges[1][:2] == (2, 3)


def test_trim_contingency_drops_zero_margins():
    t = table(
        ["AA", "BB", "ZZ"],
        ["a", "dead", "b"],
        [[1, 0, 2], [3, 0, 4], [0, 0, 0]],
    )
    trimmed, dropped_rows, dropped_cols = trim_contingency(t)
    assert dropped_rows == ("ZZ",)
    assert dropped_cols == ("dead",)
    assert trimmed.rows == ("AA", "BB")
    assert trimmed.cols == ("a", "b")
    assert trimmed.n.tolist() == [[1, 2], [3, 4]]


def test_trim_contingency_noop_on_clean_table():
    t = table(["AA"], ["a"], [[2]])
    trimmed, dropped_rows, dropped_cols = trim_contingency(t)
    assert dropped_rows == () and dropped_cols == ()
    assert np.array_equal(trimmed.n, t.n)


def test_themes_to_lexicons(corpus3):
    model = extract_themes(corpus3, k=2, seed=0)
    lexicons = themes_to_lexicons(model, top_n=5)
    assert [lex.name for lex in lexicons] == ["theme-0", "theme-1"]
    for lex, theme in zip(lexicons, model.themes):
        cloud = word_cloud(model, theme.id, top_n=5)
        assert lex.terms == frozenset(e.term for e in cloud.entries)
