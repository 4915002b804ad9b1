"""Tokenization, term weighting, lexicon counting, and gazetteer-based
country detection over full texts.

All operations are pure functions; everything here is safe for data-parallel
mapping over documents.  Tokens are lowercase, diacritic-folded ASCII.
Stemming is deliberately absent: folding covers the bilingual (en/fr) corpus
deterministically and cheaply.
"""
from __future__ import annotations

import json
import math
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterable, Mapping

_TOKEN_RE = re.compile(r"[a-z0-9]+")

COUNTS = "counts"
TFIDF = "tfidf"


def fold_ascii(text: str) -> str:
    """Lowercase and fold diacritics to ASCII where possible."""
    decomposed = unicodedata.normalize("NFKD", text.lower())
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def normalize_tokens(text: str) -> list[str]:
    """Base token stream: folded, punctuation-split, length >= 2, no pure digits.

    No stopword removal; gazetteer aliases rely on this exact normalization
    so that function words inside multi-token aliases survive.
    """
    return [
        tok for tok in _TOKEN_RE.findall(fold_ascii(text))
        if len(tok) >= 2 and not tok.isdigit()
    ]


@lru_cache(maxsize=None)
def stopwords(lang: str) -> frozenset[str]:
    """Bundled stopword list for a language tag; empty set if none is bundled."""
    name = f"stopwords_{lang}.txt"
    try:
        raw = resources.files("biblionet.data").joinpath(name).read_text("utf-8")
    except FileNotFoundError:
        return frozenset()
    return frozenset(fold_ascii(w) for w in raw.split() if w)


def tokenize(text: str, lang: str = "en") -> list[str]:
    """Ordered token list: normalized stream minus the language's stopwords."""
    stop = stopwords(lang)
    return [tok for tok in normalize_tokens(text) if tok not in stop]


@dataclass(frozen=True)
class TermVector:
    """Sparse term->value mapping, either raw counts or tf-idf weights."""

    weights: Mapping[str, float]
    mode: str

    def __post_init__(self) -> None:
        if self.mode not in (COUNTS, TFIDF):
            raise ValueError(f"unknown TermVector mode {self.mode!r}")
        if any(v == 0 for v in self.weights.values()):
            raise ValueError("TermVector must not store zero-valued entries")

    def __len__(self) -> int:
        return len(self.weights)


def term_counts(tokens: Iterable[str]) -> TermVector:
    return TermVector(weights=dict(Counter(tokens)), mode=COUNTS)


def document_frequencies(token_lists: Iterable[Iterable[str]]) -> dict[str, int]:
    """Number of documents containing each term."""
    dfs: Counter[str] = Counter()
    for tokens in token_lists:
        dfs.update(set(tokens))
    return dict(dfs)


def vectorize_tfidf(
    doc_tokens: Iterable[str],
    document_frequencies: Mapping[str, int],
    n_docs: int,
) -> TermVector:
    """tf-idf with natural log and no smoothing: weight = tf * ln(n_docs / df).

    A term present in every document gets weight 0 and is omitted, so the
    vector of a document made only of ubiquitous terms is empty.
    """
    if n_docs < 1:
        raise ValueError(f"n_docs must be >= 1, got {n_docs}")
    weights: dict[str, float] = {}
    for term, tf in Counter(doc_tokens).items():
        df = document_frequencies.get(term, 0)
        if df < 1:
            raise ValueError(f"df=0 for observed term {term!r}")
        if df > n_docs:
            raise ValueError(f"df {df} exceeds n_docs {n_docs} for term {term!r}")
        idf = math.log(n_docs / df)
        if idf != 0.0:
            weights[term] = tf * idf
    return TermVector(weights=weights, mode=TFIDF)


@dataclass(frozen=True)
class Lexicon:
    """Named set of normalized tokens standing for a semantic field."""

    name: str
    terms: frozenset[str]

    def __post_init__(self) -> None:
        if not self.terms:
            raise ValueError(f"lexicon {self.name!r} has an empty term set")


def _parse_lexicon_lines(lines: Iterable[str], where: str) -> list[Lexicon]:
    lexicons: list[Lexicon] = []
    for line_no, line in enumerate(lines, 1):
        if not line.strip():
            continue
        obj = json.loads(line)
        terms = set()
        for raw in obj["terms"]:
            toks = normalize_tokens(raw)
            if len(toks) != 1:
                raise ValueError(
                    f"{where}:{line_no}: lexicon term {raw!r} does not "
                    f"normalize to a single token"
                )
            terms.add(toks[0])
        lexicons.append(Lexicon(name=obj["name"], terms=frozenset(terms)))
    return lexicons


def load_lexicons(path: str) -> list[Lexicon]:
    """Lexicon file: one JSON record {name, terms:[...]} per line.

    Terms are normalized like tokens; a term must normalize to exactly one
    token.
    """
    with open(path, encoding="utf-8") as fh:
        return _parse_lexicon_lines(fh, path)


def bundled_lexicons() -> list[Lexicon]:
    """Small illustrative lexicons shipped with the package (examples only,
    not ground truth for any published analysis)."""
    raw = resources.files("biblionet.data").joinpath("lexicons.jsonl").read_text("utf-8")
    return _parse_lexicon_lines(raw.splitlines(), "lexicons.jsonl")


def lexicon_counts(doc_tokens: Iterable[str], lexicons: list[Lexicon]) -> dict[str, int]:
    """Token occurrences (with multiplicity) per lexicon.

    Every lexicon appears in the output, possibly with count 0.  A token
    belonging to several lexicons counts once in each.
    """
    names = [lex.name for lex in lexicons]
    if len(set(names)) != len(names):
        raise ValueError("lexicon names must be distinct")
    counts = Counter(doc_tokens)
    return {
        lex.name: sum(counts[t] for t in lex.terms)
        for lex in lexicons
    }


@dataclass(frozen=True)
class Gazetteer:
    """Country alias -> ISO alpha-2 lookup over normalized token windows."""

    aliases: Mapping[tuple[str, ...], str]

    def __post_init__(self) -> None:
        for alias, code in self.aliases.items():
            if not alias:
                raise ValueError("empty gazetteer alias")
            if not re.match(r"^[A-Z]{2}$", code):
                raise ValueError(f"invalid country code {code!r} for alias {alias}")

    @property
    def max_alias_len(self) -> int:
        return max((len(a) for a in self.aliases), default=0)


def _alias_tokens(raw: str) -> tuple[str, ...]:
    toks = tuple(normalize_tokens(raw))
    if not toks:
        raise ValueError(f"gazetteer alias {raw!r} normalizes to nothing")
    return toks


def load_gazetteer(path: str) -> Gazetteer:
    """Gazetteer file: one JSON record {code, aliases:[...]} per line."""
    mapping: dict[tuple[str, ...], str] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            for raw in obj["aliases"]:
                mapping[_alias_tokens(raw)] = obj["code"]
    return Gazetteer(aliases=mapping)


@lru_cache(maxsize=1)
def bundled_gazetteer() -> Gazetteer:
    mapping: dict[tuple[str, ...], str] = {}
    raw = resources.files("biblionet.data").joinpath("gazetteer.jsonl").read_text("utf-8")
    for line in raw.splitlines():
        if line.strip():
            obj = json.loads(line)
            for alias in obj["aliases"]:
                mapping[_alias_tokens(alias)] = obj["code"]
    return Gazetteer(aliases=mapping)


def detect_studied_countries(text: str, gazetteer: Gazetteer) -> frozenset[str]:
    """Countries mentioned in a text, by greedy longest-match alias scan.

    Multi-token aliases are matched greedily over the normalized token
    stream (stopwords retained), and the scan resumes after a match, so
    "new zealand" never also fires a bare "zealand" alias.
    """
    tokens = normalize_tokens(text)
    found: set[str] = set()
    max_len = gazetteer.max_alias_len
    i = 0
    n = len(tokens)
    while i < n:
        matched = 0
        for length in range(min(max_len, n - i), 0, -1):
            code = gazetteer.aliases.get(tuple(tokens[i:i + length]))
            if code is not None:
                found.add(code)
                matched = length
                break
        i += matched if matched else 1
    return frozenset(found)
