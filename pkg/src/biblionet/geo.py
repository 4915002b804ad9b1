"""Country-level analysis: diachronic activity counts, country x lexicon
contingency tables with over/under-representation residuals, and
classification of countries by thematic profile.

A paper attached to several countries contributes its full counts to each of
them (no fractional splitting); callers who want splitting can pre-split
upstream.  Contingency accumulation iterates papers in id order, so results
are independent of record order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .corpus import Corpus, PaperRecord, PeriodFilter, filter_period
from .text import Gazetteer, Lexicon, detect_studied_countries, lexicon_counts, tokenize

ROLE_STUDIED = "studied"
ROLE_AFFILIATION = "affiliation"
ROLES = (ROLE_STUDIED, ROLE_AFFILIATION)

# Standardized-residual cut for the over/under-represented labels.
RESIDUAL_THRESHOLD = 2.0

LABEL_OVER = "over"
LABEL_UNDER = "under"
LABEL_NEUTRAL = "neutral"


def effective_studied(rec: PaperRecord, gazetteer: Gazetteer | None) -> tuple[str, ...]:
    """Studied countries for a record: explicit metadata wins; otherwise a
    gazetteer scan of the full text fills in, when both are available."""
    if rec.studied or gazetteer is None or rec.text is None:
        return rec.studied
    return tuple(sorted(detect_studied_countries(rec.text, gazetteer)))


@dataclass(frozen=True)
class CountryActivity:
    """Per-country authored/studied paper counts for a period.

    A paper counts at most once per country per role, however many times the
    country repeats in its metadata.
    """

    period: PeriodFilter
    authored: Mapping[str, int]
    studied: Mapping[str, int]

    def countries(self) -> list[str]:
        return sorted(set(self.authored) | set(self.studied))


def country_activity(
    corpus: Corpus,
    period: PeriodFilter,
    gazetteer: Gazetteer | None = None,
) -> CountryActivity:
    view = filter_period(corpus, period)
    authored: dict[str, int] = {}
    studied: dict[str, int] = {}
    for pid in sorted(view.papers):
        rec = view.papers[pid]
        for code in set(rec.affiliations):
            authored[code] = authored.get(code, 0) + 1
        for code in set(effective_studied(rec, gazetteer)):
            studied[code] = studied.get(code, 0) + 1
    return CountryActivity(period=period, authored=authored, studied=studied)


@dataclass(frozen=True)
class ContingencyTable:
    """Country x lexicon/theme count matrix.

    Columns are whatever named term sets were counted; the table is agnostic
    to whether they came from user lexicons or extracted themes.
    """

    rows: tuple[str, ...]
    cols: tuple[str, ...]
    n: np.ndarray

    def __post_init__(self) -> None:
        if self.n.shape != (len(self.rows), len(self.cols)):
            raise ValueError(
                f"count matrix shape {self.n.shape} does not match "
                f"{len(self.rows)} rows x {len(self.cols)} cols"
            )
        if (self.n < 0).any():
            raise ValueError("contingency counts must be non-negative")

    @property
    def row_totals(self) -> np.ndarray:
        return self.n.sum(axis=1)

    @property
    def col_totals(self) -> np.ndarray:
        return self.n.sum(axis=0)

    @property
    def grand_total(self) -> int:
        return int(self.n.sum())


def build_contingency(
    corpus: Corpus,
    lexicons: Sequence[Lexicon],
    role: str,
    gazetteer: Gazetteer | None = None,
) -> ContingencyTable:
    """Count lexicon-term occurrences in full texts, accumulated per country.

    A paper's counts go to every country it is attached to under the chosen
    role.  Papers without text are skipped; it is an error if none has text.
    """
    if role not in ROLES:
        raise ValueError(f"role must be one of {ROLES}, got {role!r}")
    if not lexicons:
        raise ValueError("at least one lexicon is required")
    names = [lex.name for lex in lexicons]
    cell: dict[tuple[str, str], int] = {}
    countries: set[str] = set()
    n_texted = 0
    for pid in sorted(corpus.papers):
        rec = corpus.papers[pid]
        if rec.text is None:
            continue
        n_texted += 1
        attached = rec.affiliations if role == ROLE_AFFILIATION else effective_studied(rec, gazetteer)
        codes = set(attached)
        if not codes:
            continue
        counts = lexicon_counts(tokenize(rec.text, rec.lang), list(lexicons))
        for code in codes:
            countries.add(code)
            for name in names:
                key = (code, name)
                cell[key] = cell.get(key, 0) + counts[name]
    if n_texted == 0:
        raise ValueError("no paper in the corpus has text")
    rows = tuple(sorted(countries))
    n = np.zeros((len(rows), len(names)), dtype=np.int64)
    for (code, name), count in cell.items():
        n[rows.index(code), names.index(name)] = count
    return ContingencyTable(rows=rows, cols=tuple(names), n=n)


def representation_residuals(table: ContingencyTable) -> np.ndarray:
    """Standardized residuals r = (n - e) / sqrt(e) with e = row*col/N.

    Requires a strictly positive grand total and strictly positive row and
    column totals; the error names the first offending row or column.
    """
    if table.grand_total <= 0:
        raise ValueError("grand total must be positive")
    row_tot = table.row_totals
    col_tot = table.col_totals
    for code, tot in zip(table.rows, row_tot):
        if tot == 0:
            raise ValueError(f"zero total for row '{code}'")
    for name, tot in zip(table.cols, col_tot):
        if tot == 0:
            raise ValueError(f"zero total for column '{name}'")
    expected = np.outer(row_tot, col_tot) / table.grand_total
    return (table.n - expected) / np.sqrt(expected)


def residual_label(value: float) -> str:
    """over / under / neutral at the +-2 standardized-residual cut."""
    if value > RESIDUAL_THRESHOLD:
        return LABEL_OVER
    if value < -RESIDUAL_THRESHOLD:
        return LABEL_UNDER
    return LABEL_NEUTRAL


@dataclass(frozen=True)
class CountryClassification:
    """k-class grouping of countries by thematic profile.

    ``merges`` is the full agglomeration sequence: (cluster_a, cluster_b,
    height) with scipy-style labels (originals 0..n-1 in ``countries`` order,
    merge i creating cluster n+i).  ``assignment`` numbers classes 1..k in
    order of each class's lexicographically smallest country.  Countries
    whose profile row was all zero are excluded and listed.
    """

    countries: tuple[str, ...]
    assignment: Mapping[str, int]
    merges: tuple[tuple[int, int, float], ...]
    k: int
    excluded: tuple[str, ...] = ()

    @property
    def heights(self) -> tuple[float, ...]:
        return tuple(m[2] for m in self.merges)


def _ward_dendrogram(
    profiles: np.ndarray, codes: Sequence[str]
) -> list[tuple[int, int, float]]:
    """Agglomerative Ward merges over row profiles (Lance-Williams update).

    Heights follow the convention where two singletons merge at their
    Euclidean distance.  Ties on merge cost break on the lexicographically
    smallest pair of cluster representatives (each cluster represented by
    its smallest member code), which makes the dendrogram deterministic.
    """
    n = len(codes)
    size = {i: 1 for i in range(n)}
    rep = {i: codes[i] for i in range(n)}
    # d2 holds squared merge heights: for singletons, squared Euclidean.
    d2: dict[tuple[int, int], float] = {}
    for i in range(n):
        for j in range(i + 1, n):
            diff = profiles[i] - profiles[j]
            d2[(i, j)] = float(diff @ diff)
    active = set(range(n))
    merges: list[tuple[int, int, float]] = []
    next_id = n
    for _ in range(n - 1):
        best_pair = None
        best_d2 = math.inf
        best_reps = None
        for (i, j), dist in d2.items():
            reps = (rep[i], rep[j]) if rep[i] < rep[j] else (rep[j], rep[i])
            if dist < best_d2 or (dist == best_d2 and reps < best_reps):
                best_pair, best_d2, best_reps = (i, j), dist, reps
        i, j = best_pair
        new = next_id
        next_id += 1
        height = math.sqrt(max(best_d2, 0.0))
        merges.append((i, j, height))
        # Lance-Williams for Ward on squared heights.
        si, sj = size[i], size[j]
        for k_id in active - {i, j}:
            sk = size[k_id]
            dik = d2[(min(i, k_id), max(i, k_id))]
            djk = d2[(min(j, k_id), max(j, k_id))]
            dij = best_d2
            d2_new = ((si + sk) * dik + (sj + sk) * djk - sk * dij) / (si + sj + sk)
            d2[(k_id, new)] = d2_new
        for k_id in list(d2):
            if i in k_id or j in k_id:
                del d2[k_id]
        active -= {i, j}
        active.add(new)
        size[new] = si + sj
        rep[new] = min(rep[i], rep[j])
    return merges


def _cut_merges(merges: Sequence[tuple[int, int, float]], n: int, k: int) -> list[set[int]]:
    """Clusters (as sets of original indices) after applying the first
    n - k merges."""
    members: dict[int, set[int]] = {i: {i} for i in range(n)}
    for step, (a, b, _h) in enumerate(merges[: n - k]):
        members[n + step] = members.pop(a) | members.pop(b)
    return list(members.values())


def trim_contingency(
    table: ContingencyTable,
) -> tuple[ContingencyTable, tuple[str, ...], tuple[str, ...]]:
    """Table without all-zero rows and columns, plus what was dropped.

    Zero rows and columns carry no signal and make residuals undefined;
    residual analysis and classification both run on the trimmed table.
    """
    row_tot = table.row_totals
    col_tot = table.col_totals
    keep_rows = [i for i in range(len(table.rows)) if row_tot[i] > 0]
    keep_cols = [j for j in range(len(table.cols)) if col_tot[j] > 0]
    dropped_rows = tuple(table.rows[i] for i in range(len(table.rows)) if row_tot[i] == 0)
    dropped_cols = tuple(table.cols[j] for j in range(len(table.cols)) if col_tot[j] == 0)
    trimmed = ContingencyTable(
        rows=tuple(table.rows[i] for i in keep_rows),
        cols=tuple(table.cols[j] for j in keep_cols),
        n=table.n[np.ix_(keep_rows, keep_cols)] if keep_rows and keep_cols
        else np.zeros((len(keep_rows), len(keep_cols)), dtype=table.n.dtype),
    )
    return trimmed, dropped_rows, dropped_cols


def classify_countries(table: ContingencyTable, k: int) -> CountryClassification:
    """Ward-linkage agglomeration of row profiles, cut into k classes.

    Rows are normalized to sum to one before clustering, so scaling any
    row's raw counts leaves the classification unchanged.
    """
    row_tot = table.row_totals
    included = [i for i in range(len(table.rows)) if row_tot[i] > 0]
    excluded = tuple(table.rows[i] for i in range(len(table.rows)) if row_tot[i] == 0)
    codes = [table.rows[i] for i in included]
    n = len(codes)
    if n < 1:
        raise ValueError("no country has a non-zero profile")
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    profiles = table.n[included].astype(np.float64)
    profiles /= row_tot[included, np.newaxis]
    merges = _ward_dendrogram(profiles, codes)
    clusters = _cut_merges(merges, n, k)
    clusters.sort(key=lambda members: min(codes[i] for i in members))
    assignment = {
        codes[i]: class_id
        for class_id, members in enumerate(clusters, start=1)
        for i in members
    }
    return CountryClassification(
        countries=tuple(codes),
        assignment=assignment,
        merges=tuple(merges),
        k=k,
        excluded=excluded,
    )


def themes_to_lexicons(model, top_n: int = 50) -> list[Lexicon]:
    """Turn a theme model's top terms into lexicons, so extracted themes can
    serve as contingency columns in place of user-supplied lexicons."""
    from .themes import word_cloud  # local import avoids a cycle

    lexicons = []
    for theme in model.themes:
        cloud = word_cloud(model, theme.id, top_n=top_n)
        terms = frozenset(entry.term for entry in cloud.entries)
        lexicons.append(Lexicon(name=f"theme-{theme.id}", terms=terms))
    return lexicons
