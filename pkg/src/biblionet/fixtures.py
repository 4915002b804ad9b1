"""Deterministic synthetic corpora with planted structure, plus the small
hand-built corpus shared by tests, demos, and the service examples.

Planted generation exists because no real corpus ships with the package:
correctness is judged by recovering structure we put in on purpose
(keyword blocks for community detection, disjoint vocabularies for theme
extraction).  Everything is a pure function of the spec, seed included,
so generated files are reproducible byte for byte.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Mapping

from .corpus import Corpus, PaperRecord, normalize_keywords
from .text import stopwords, normalize_tokens

# Keyword drawn from the document's own block with this probability,
# uniformly from the other blocks otherwise.
IN_BLOCK_PROB = 0.9

_YEARS = (2000, 2015)
_COUNTRIES = ("BR", "CN", "DE", "FR", "GB", "US")
_TEXT_TOKENS = 30


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for one synthetic corpus.

    keyword_blocks plant the community structure of the co-occurrence
    network; theme_vocabularies plant the full-text themes.  n_keywords is
    the number of keyword draws per document (duplicates collapse).
    """

    n_docs: int
    n_keywords: int
    keyword_blocks: tuple[tuple[str, ...], ...]
    theme_vocabularies: tuple[tuple[str, ...], ...]
    seed: int

    def __post_init__(self) -> None:
        if self.n_docs < 1:
            raise ValueError(f"n_docs must be >= 1, got {self.n_docs}")
        if self.n_keywords < 1:
            raise ValueError(f"n_keywords must be >= 1, got {self.n_keywords}")
        _check_disjoint_groups(self.keyword_blocks, "keyword block")
        _check_disjoint_groups(self.theme_vocabularies, "theme vocabulary")
        for block in self.keyword_blocks:
            bad = [kw for kw in block if normalize_keywords([kw]) != (kw,)]
            if bad:
                raise ValueError(f"keyword {bad[0]!r} is not in normalized form")
        stop = stopwords("en")
        for vocab in self.theme_vocabularies:
            for term in vocab:
                if normalize_tokens(term) != [term] or term in stop:
                    raise ValueError(
                        f"vocabulary term {term!r} would not survive tokenization"
                    )

    @property
    def n_blocks(self) -> int:
        return len(self.keyword_blocks)

    @property
    def n_themes(self) -> int:
        return len(self.theme_vocabularies)


def _check_disjoint_groups(groups: tuple[tuple[str, ...], ...], what: str) -> None:
    if not groups:
        raise ValueError(f"need at least one {what}")
    seen: set[str] = set()
    for group in groups:
        if not group:
            raise ValueError(f"empty {what}")
        for item in group:
            if item in seen:
                raise ValueError(f"{what}s must be disjoint; {item!r} repeats")
            seen.add(item)


def load_spec(path: str) -> SyntheticSpec:
    """Read a generation spec from a JSON file.

    Expected object keys: n_docs, n_keywords, keyword_blocks (list of lists
    of strings), theme_vocabularies (same shape), seed.
    """
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError("spec file must hold a JSON object")
    expected = {"n_docs", "n_keywords", "keyword_blocks", "theme_vocabularies", "seed"}
    missing = expected - set(raw)
    if missing:
        raise ValueError(f"spec file missing keys: {', '.join(sorted(missing))}")
    unknown = set(raw) - expected
    if unknown:
        raise ValueError(f"spec file has unknown keys: {', '.join(sorted(unknown))}")
    return SyntheticSpec(
        n_docs=int(raw["n_docs"]),
        n_keywords=int(raw["n_keywords"]),
        keyword_blocks=tuple(tuple(str(kw) for kw in b) for b in raw["keyword_blocks"]),
        theme_vocabularies=tuple(
            tuple(str(t) for t in v) for v in raw["theme_vocabularies"]
        ),
        seed=int(raw["seed"]),
    )


@dataclass(frozen=True)
class PlantedCorpus:
    """Generated corpus plus the ground truth the generator planted."""

    corpus: Corpus
    doc_blocks: Mapping[str, int]
    doc_themes: Mapping[str, int]


def generate_planted_corpus(spec: SyntheticSpec) -> PlantedCorpus:
    """Build a corpus whose keywords cluster by block and whose texts use one
    theme vocabulary each.

    Documents rotate through blocks and themes so every group is populated.
    Each keyword draw stays inside the document's block with probability
    IN_BLOCK_PROB and falls uniformly on the other blocks otherwise (always
    inside when there is a single block).
    """
    rng = random.Random(spec.seed)
    others = [
        tuple(kw for j, block in enumerate(spec.keyword_blocks) if j != i for kw in block)
        for i in range(spec.n_blocks)
    ]
    records = []
    doc_blocks: dict[str, int] = {}
    doc_themes: dict[str, int] = {}
    for i in range(spec.n_docs):
        pid = f"S{i:05d}"
        block = i % spec.n_blocks
        theme = i % spec.n_themes
        year = rng.randrange(_YEARS[0], _YEARS[1] + 1)
        affiliation = rng.choice(_COUNTRIES)
        studied = rng.choice(_COUNTRIES)
        drawn = []
        for _ in range(spec.n_keywords):
            if not others[block] or rng.random() < IN_BLOCK_PROB:
                drawn.append(rng.choice(spec.keyword_blocks[block]))
            else:
                drawn.append(rng.choice(others[block]))
        vocab = spec.theme_vocabularies[theme]
        text = " ".join(rng.choice(vocab) for _ in range(_TEXT_TOKENS))
        records.append(
            PaperRecord(
                id=pid,
                title=f"Synthetic study {i:05d}",
                year=year,
                lang="en",
                affiliations=(affiliation,),
                studied=(studied,),
                keywords=normalize_keywords(drawn),
                text=text,
                refs=(),
                origin="seed",
            )
        )
        doc_blocks[pid] = block
        doc_themes[pid] = theme
    return PlantedCorpus(
        corpus=Corpus(records), doc_blocks=doc_blocks, doc_themes=doc_themes
    )


def micro_corpus() -> Corpus:
    """Three hand-built papers exercising every record field.

    P1 and P2 overlap on the "urban" keyword, P2 and P3 on "model"; periods
    [2000,2005] and [2012,2012] split the corpus as the geo examples expect.
    """
    return Corpus(
        [
            PaperRecord(
                id="P1",
                title="Urban networks and regional growth",
                year=2000,
                lang="en",
                affiliations=("FR",),
                studied=("DE",),
                keywords=("network", "urban"),
                text="Urban networks structure the growth of cities across regions.",
                refs=("R1",),
                origin="seed",
            ),
            PaperRecord(
                id="P2",
                title="Comparing models of urban systems",
                year=2005,
                lang="en",
                affiliations=("FR", "US"),
                studied=("FR",),
                keywords=("model", "urban"),
                text="Models of urban systems compare cities between regions of France.",
                refs=("P1", "R9"),
                origin="seed",
            ),
            PaperRecord(
                id="P3",
                title="Simulating city dynamics",
                year=2012,
                lang="en",
                affiliations=("BR",),
                studied=("BR",),
                keywords=("model", "simulation"),
                text="Simulation models explore the dynamics of cities in Brazil.",
                refs=("R9",),
                origin="seed",
            ),
        ]
    )
