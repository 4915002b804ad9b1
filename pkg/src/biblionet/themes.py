"""Full-text theme extraction and word-cloud data.

Documents carrying text are embedded as unit-normalized TF-IDF vectors and
grouped into k themes by spherical k-means (cosine similarity, seeded
k-means++ initialization, at most 100 iterations or an assignment fixpoint).
Word clouds expose each theme's most frequent terms with exactly
proportional relative sizes, kept as rationals so proportionality survives
serialization untouched.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .corpus import Corpus
from .text import document_frequencies, term_counts, tokenize, vectorize_tfidf

_MAX_ITER = 100


@dataclass(frozen=True)
class Theme:
    """One document cluster: members, their summed term counts, and the
    unit-length centroid in TF-IDF space."""

    id: int
    doc_ids: tuple[str, ...]
    term_frequencies: Mapping[str, int]
    centroid: Mapping[str, float]

    @property
    def doc_count(self) -> int:
        return len(self.doc_ids)


@dataclass(frozen=True)
class ThemeModel:
    """Partition of all texted documents into k non-empty themes."""

    k: int
    seed: int
    themes: tuple[Theme, ...]
    assignment: Mapping[str, int]
    objective_trace: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.themes) != self.k:
            raise ValueError(f"expected {self.k} themes, got {len(self.themes)}")
        seen: set[str] = set()
        for i, theme in enumerate(self.themes):
            if theme.id != i:
                raise ValueError(f"theme ids must run 0..k-1, found {theme.id} at {i}")
            if not theme.doc_ids:
                raise ValueError(f"theme {i} is empty")
            overlap = seen.intersection(theme.doc_ids)
            if overlap:
                raise ValueError(f"document {sorted(overlap)[0]!r} is in two themes")
            seen.update(theme.doc_ids)
        if seen != set(self.assignment):
            raise ValueError("theme members and assignment disagree")

    @property
    def objective(self) -> float:
        """Final summed cosine similarity of documents to their centroids."""
        return self.objective_trace[-1]

    @property
    def n_docs(self) -> int:
        return len(self.assignment)


@dataclass(frozen=True)
class CloudEntry:
    term: str
    frequency: int
    relative_size: Fraction


@dataclass(frozen=True)
class WordCloud:
    """Top terms of one theme; sizes are frequency / max frequency exactly."""

    theme_id: int
    doc_count: int
    color_rank: int
    entries: tuple[CloudEntry, ...]


def _texted_ids(corpus: Corpus) -> list[str]:
    return [
        pid
        for pid in sorted(corpus.papers)
        if corpus.papers[pid].text is not None and corpus.papers[pid].text.strip()
    ]


def _embed(
    corpus: Corpus, doc_ids: list[str]
) -> tuple[np.ndarray, list[str], list[dict[str, int]]]:
    """Unit-normalized TF-IDF matrix (docs x vocabulary), the vocabulary, and
    raw per-document term counts.

    A document whose tokens are all stopwords or all ubiquitous terms embeds
    as a zero row; it still belongs to the partition and lands in theme 0
    through the lowest-index tie rule.
    """
    token_lists = [
        tokenize(corpus.papers[pid].text, corpus.papers[pid].lang) for pid in doc_ids
    ]
    dfs = document_frequencies(token_lists)
    vectors = [
        vectorize_tfidf(tokens, dfs, len(doc_ids)).weights for tokens in token_lists
    ]
    vocab = sorted({term for vec in vectors for term in vec})
    col = {term: j for j, term in enumerate(vocab)}
    x = np.zeros((len(doc_ids), len(vocab)), dtype=np.float64)
    for i, vec in enumerate(vectors):
        for term, w in vec.items():
            x[i, col[term]] = w
    norms = np.sqrt((x * x).sum(axis=1))
    nonzero = norms > 0.0
    x[nonzero] /= norms[nonzero, np.newaxis]
    counts = [
        {t: int(c) for t, c in term_counts(tokens).weights.items()}
        for tokens in token_lists
    ]
    return x, vocab, counts


def _seed_centroids(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ over cosine distance: the next seed is drawn with probability
    proportional to 1 - (best similarity so far); zero rows are never seeds."""
    row_norms = (x * x).sum(axis=1)
    usable = np.flatnonzero(row_norms > 0.0)
    if len(usable) == 0:
        raise ValueError("no document has usable terms after TF-IDF weighting")
    centroids = np.empty((k, x.shape[1]), dtype=np.float64)
    first = int(usable[int(rng.integers(len(usable)))])
    centroids[0] = x[first]
    best_sim = x @ centroids[0]
    chosen = {first}
    for j in range(1, k):
        weights = np.clip(1.0 - best_sim, 0.0, None)
        weights[row_norms == 0.0] = 0.0
        for idx in chosen:
            weights[idx] = 0.0
        total = float(weights.sum())
        if total > 0.0:
            target = rng.random() * total
            pick = int(np.searchsorted(np.cumsum(weights), target, side="right"))
            pick = min(pick, len(weights) - 1)
        else:
            pick = min(int(i) for i in usable if int(i) not in chosen)
        centroids[j] = x[pick]
        chosen.add(pick)
        best_sim = np.maximum(best_sim, x @ centroids[j])
    return centroids


def _repair_empty(
    assignment: np.ndarray,
    sims: np.ndarray,
    centroids: np.ndarray,
    x: np.ndarray,
    k: int,
) -> None:
    """Reseed each empty theme with the document farthest from its own
    centroid, taken from a theme that can spare a member."""
    counts = np.bincount(assignment, minlength=k)
    row_norms = (x * x).sum(axis=1)
    for empty in np.flatnonzero(counts == 0):
        own = sims[np.arange(len(assignment)), assignment].copy()
        movable = (counts[assignment] > 1) & (row_norms > 0.0)
        own[~movable] = np.inf
        if not np.isfinite(own).any():
            raise ValueError("cannot repair an empty theme: no movable document")
        farthest = int(np.argmin(own))
        counts[assignment[farthest]] -= 1
        assignment[farthest] = empty
        counts[empty] = 1
        centroids[empty] = x[farthest]
        sims[:, empty] = x @ centroids[empty]


def extract_themes(corpus: Corpus, k: int = 10, *, seed: int) -> ThemeModel:
    """Cluster all texted documents into k themes.

    Deterministic in (corpus, k, seed); the summed-cosine objective recorded
    after every iteration never decreases.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    doc_ids = _texted_ids(corpus)
    if len(doc_ids) < k:
        raise ValueError(
            f"need at least {k} documents with text to extract {k} themes, "
            f"found {len(doc_ids)}"
        )
    x, vocab, counts = _embed(corpus, doc_ids)
    rng = np.random.default_rng(seed)
    centroids = _seed_centroids(x, k, rng)
    prev: np.ndarray | None = None
    assignment = np.zeros(len(doc_ids), dtype=np.intp)
    trace: list[float] = []
    for _ in range(_MAX_ITER):
        sims = x @ centroids.T
        assignment = np.argmax(sims, axis=1)
        _repair_empty(assignment, sims, centroids, x, k)
        if prev is not None and np.array_equal(assignment, prev):
            break
        for theme in range(k):
            members = assignment == theme
            total = x[members].sum(axis=0)
            norm = float(np.sqrt((total * total).sum()))
            if norm > 0.0:
                centroids[theme] = total / norm
        trace.append(
            float((x @ centroids.T)[np.arange(len(doc_ids)), assignment].sum())
        )
        prev = assignment
    themes = []
    for theme in range(k):
        member_idx = np.flatnonzero(assignment == theme)
        freqs: dict[str, int] = {}
        for i in member_idx:
            for term, c in counts[i].items():
                freqs[term] = freqs.get(term, 0) + c
        row = centroids[theme]
        themes.append(
            Theme(
                id=theme,
                doc_ids=tuple(doc_ids[i] for i in member_idx),
                term_frequencies=dict(sorted(freqs.items())),
                centroid={vocab[j]: float(row[j]) for j in np.flatnonzero(row)},
            )
        )
    return ThemeModel(
        k=k,
        seed=seed,
        themes=tuple(themes),
        assignment={doc_ids[i]: int(assignment[i]) for i in range(len(doc_ids))},
        objective_trace=tuple(trace),
    )


def word_cloud(model: ThemeModel, theme_id: int, top_n: int = 50) -> WordCloud:
    """Top terms of a theme by in-theme frequency.

    relative_size is frequency over the cloud's maximum frequency, exact;
    entries sort by frequency descending, term ascending on ties.
    color_rank ranks themes by document count, 1 for the largest (theme id
    breaks ties).
    """
    if not isinstance(theme_id, int) or not 0 <= theme_id < model.k:
        raise ValueError(
            f"unknown theme id {theme_id!r}; model has themes 0..{model.k - 1}"
        )
    if top_n < 1:
        raise ValueError(f"top_n must be >= 1, got {top_n}")
    theme = model.themes[theme_id]
    ranked = sorted(
        theme.term_frequencies.items(), key=lambda item: (-item[1], item[0])
    )[:top_n]
    max_freq = ranked[0][1] if ranked else 1
    entries = tuple(
        CloudEntry(term=t, frequency=f, relative_size=Fraction(f, max_freq))
        for t, f in ranked
    )
    order = sorted(model.themes, key=lambda th: (-th.doc_count, th.id))
    color_rank = next(i + 1 for i, th in enumerate(order) if th.id == theme_id)
    return WordCloud(
        theme_id=theme_id,
        doc_count=theme.doc_count,
        color_rank=color_rank,
        entries=entries,
    )
