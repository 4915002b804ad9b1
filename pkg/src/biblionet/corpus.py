"""Publication corpus: record model, ingestion, validation, period filtering,
and citation-relation derivation.

The corpus file format is UTF-8 JSON lines, one record per line, with the
fields of :class:`PaperRecord`.  Records are normalized at ingest (keywords
lowercased, trimmed, deduplicated); value-level rule checking is a separate,
reporting-only step (:func:`validate_corpus`) so that a partially invalid
corpus can still be inspected and, if asked, explored after dropping the
offending records.
"""
from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

ORIGIN_CLASSES = ("seed", "cited", "citing", "external")
KNOWN_LANGS = ("en", "fr")
YEAR_MIN = 1900
YEAR_MAX = 2100

# Canonical field order of the line format; also the serialization order.
FIELD_ORDER = (
    "id", "title", "year", "lang", "affiliations",
    "studied", "keywords", "text", "refs", "origin",
)

_COUNTRY_RE = re.compile(r"^[A-Z]{2}$")


class CorpusFormatError(ValueError):
    """A corpus file line that does not conform to the record schema."""

    def __init__(self, line_no: int, field: str, message: str):
        self.line_no = line_no
        self.field = field
        super().__init__(f"line {line_no}, field '{field}': {message}")


def normalize_keywords(keywords: Iterable[str]) -> tuple[str, ...]:
    """Lowercase, trim, and deduplicate keywords, preserving first-seen order.

    Entries that are empty after trimming are dropped.
    """
    seen: dict[str, None] = {}
    for kw in keywords:
        norm = kw.strip().lower()
        if norm:
            seen.setdefault(norm, None)
    return tuple(seen)


@dataclass(frozen=True)
class PaperRecord:
    """One publication: metadata, countries, keywords, full text, references.

    ``affiliations`` are the authors' affiliation countries and ``studied``
    the countries the paper is about, both as ISO-3166-1 alpha-2 codes.
    ``refs`` are opaque reference identifiers; they may name works that are
    not records of the corpus.  ``origin`` records how the paper entered the
    corpus: a journal paper (``seed``), a paper it cites (``cited``), a paper
    citing it (``citing``), or anything else (``external``).
    """

    id: str
    title: str
    year: int
    lang: str = "en"
    affiliations: tuple[str, ...] = ()
    studied: tuple[str, ...] = ()
    keywords: tuple[str, ...] = ()
    text: str | None = None
    refs: tuple[str, ...] = ()
    origin: str = "seed"


@dataclass(frozen=True)
class PeriodFilter:
    """Inclusive year interval; single-year periods are expressible."""

    from_year: int
    to_year: int

    def __post_init__(self) -> None:
        if self.from_year > self.to_year:
            raise ValueError(
                f"invalid period: from_year {self.from_year} > to_year {self.to_year}"
            )

    def contains(self, year: int) -> bool:
        return self.from_year <= year <= self.to_year


@dataclass(frozen=True)
class CouplingLink:
    """Bibliographic coupling between two papers that cite common references.

    Canonically oriented: ``a < b`` lexicographically.
    """

    a: str
    b: str
    weight: int

    def __post_init__(self) -> None:
        if not self.a < self.b:
            raise ValueError(f"coupling link not canonical: {self.a!r} !< {self.b!r}")
        if self.weight < 1:
            raise ValueError(f"coupling weight must be >= 1, got {self.weight}")


@dataclass(frozen=True)
class Violation:
    """One broken record rule, identified by record id and rule name."""

    record_id: str
    rule: str
    detail: str


class Corpus:
    """Immutable mapping of paper id to record, with derived indexes.

    The keyword and year indexes are rebuilt from the records on
    construction, so they are consistent by definition.  Instances are safe
    to share across threads; every operation on them is a pure read.
    """

    __slots__ = ("_papers", "_keyword_index", "_year_index")

    def __init__(self, papers: Iterable[PaperRecord]):
        mapping: dict[str, PaperRecord] = {}
        for rec in papers:
            if rec.id in mapping:
                raise ValueError(f"duplicate id '{rec.id}'")
            mapping[rec.id] = rec
        kw_index: dict[str, set[str]] = {}
        year_index: dict[int, set[str]] = {}
        for rec in mapping.values():
            for kw in rec.keywords:
                kw_index.setdefault(kw, set()).add(rec.id)
            year_index.setdefault(rec.year, set()).add(rec.id)
        self._papers = mapping
        self._keyword_index = {k: frozenset(v) for k, v in kw_index.items()}
        self._year_index = {y: frozenset(v) for y, v in year_index.items()}

    @property
    def papers(self) -> Mapping[str, PaperRecord]:
        return MappingProxyType(self._papers)

    @property
    def keyword_index(self) -> Mapping[str, frozenset[str]]:
        return MappingProxyType(self._keyword_index)

    @property
    def year_index(self) -> Mapping[int, frozenset[str]]:
        return MappingProxyType(self._year_index)

    def __len__(self) -> int:
        return len(self._papers)

    def __iter__(self) -> Iterator[PaperRecord]:
        return iter(self._papers.values())

    def __contains__(self, paper_id: str) -> bool:
        return paper_id in self._papers

    def ids(self) -> frozenset[str]:
        return frozenset(self._papers)

    def year_range(self) -> tuple[int, int] | None:
        """(min_year, max_year) over all records, or None for an empty corpus."""
        if not self._papers:
            return None
        years = [rec.year for rec in self._papers.values()]
        return min(years), max(years)


def _parse_record(obj: object, line_no: int) -> PaperRecord:
    if not isinstance(obj, dict):
        raise CorpusFormatError(line_no, "record", "expected a JSON object")
    unknown = sorted(set(obj) - set(FIELD_ORDER))
    if unknown:
        raise CorpusFormatError(line_no, unknown[0], "unknown field")
    for required in ("id", "title", "year"):
        if required not in obj:
            raise CorpusFormatError(line_no, required, "missing required field")

    def str_field(name: str, value: object) -> str:
        if not isinstance(value, str):
            raise CorpusFormatError(line_no, name, f"expected a string, got {type(value).__name__}")
        return value

    def str_list(name: str) -> tuple[str, ...]:
        value = obj.get(name, [])
        if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
            raise CorpusFormatError(line_no, name, "expected a list of strings")
        return tuple(value)

    paper_id = str_field("id", obj["id"])
    if not paper_id:
        raise CorpusFormatError(line_no, "id", "id must be non-empty")
    year = obj["year"]
    if isinstance(year, bool) or not isinstance(year, int):
        raise CorpusFormatError(line_no, "year", f"expected an integer, got {year!r}")
    text = obj.get("text")
    if text is not None and not isinstance(text, str):
        raise CorpusFormatError(line_no, "text", "expected a string or null")
    return PaperRecord(
        id=paper_id,
        title=str_field("title", obj["title"]),
        year=year,
        lang=str_field("lang", obj.get("lang", "en")),
        affiliations=str_list("affiliations"),
        studied=str_list("studied"),
        keywords=normalize_keywords(str_list("keywords")),
        text=text,
        refs=str_list("refs"),
        origin=str_field("origin", obj.get("origin", "seed")),
    )


def load_corpus(path: str) -> Corpus:
    """Load a JSON-lines corpus file.

    Raises OSError if the file is unreadable and CorpusFormatError for a
    malformed line (the error names the 1-based line and the field) or a
    duplicate id.
    """
    records: list[PaperRecord] = []
    seen: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            stripped = line.strip()
            if not stripped:
                raise CorpusFormatError(line_no, "record", "blank line")
            try:
                obj = json.loads(stripped)
            except json.JSONDecodeError as err:
                raise CorpusFormatError(line_no, "record", f"invalid JSON: {err.msg}") from err
            rec = _parse_record(obj, line_no)
            if rec.id in seen:
                raise CorpusFormatError(
                    line_no, "id",
                    f"duplicate id '{rec.id}' (first seen on line {seen[rec.id]})",
                )
            seen[rec.id] = line_no
            records.append(rec)
    return Corpus(records)


def record_to_dict(rec: PaperRecord) -> dict:
    """Record as a JSON-ready dict in canonical field order."""
    return {
        "id": rec.id,
        "title": rec.title,
        "year": rec.year,
        "lang": rec.lang,
        "affiliations": list(rec.affiliations),
        "studied": list(rec.studied),
        "keywords": list(rec.keywords),
        "text": rec.text,
        "refs": list(rec.refs),
        "origin": rec.origin,
    }


def dump_corpus(corpus: Corpus) -> str:
    """Serialize to the canonical line format (byte-deterministic)."""
    lines = [
        json.dumps(record_to_dict(rec), ensure_ascii=False, separators=(",", ":"))
        for rec in corpus
    ]
    return "".join(line + "\n" for line in lines)


def save_corpus(corpus: Corpus, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_corpus(corpus))


def validate_corpus(corpus: Corpus) -> list[Violation]:
    """Check every record's value rules; violations are data, not failures.

    Returns an empty list iff every record invariant holds.  Ordering is
    deterministic: by record id, then rule name.
    """
    report: list[Violation] = []
    for rec in corpus:
        report.extend(_record_violations(rec))
    report.sort(key=lambda v: (v.record_id, v.rule))
    return report


def _record_violations(rec: PaperRecord) -> list[Violation]:
    out: list[Violation] = []
    if not rec.id:
        out.append(Violation(rec.id, "id", "id must be non-empty"))
    if not YEAR_MIN <= rec.year <= YEAR_MAX:
        out.append(Violation(
            rec.id, "year_range",
            f"year {rec.year} outside [{YEAR_MIN}, {YEAR_MAX}]",
        ))
    bad_codes = [c for c in (*rec.affiliations, *rec.studied) if not _COUNTRY_RE.match(c)]
    if bad_codes:
        out.append(Violation(
            rec.id, "country_code",
            "not two uppercase ASCII letters: " + ", ".join(repr(c) for c in bad_codes),
        ))
    if rec.keywords != normalize_keywords(rec.keywords):
        out.append(Violation(
            rec.id, "keywords_normalized",
            "keywords must be lowercase, trimmed, and deduplicated",
        ))
    if rec.lang not in KNOWN_LANGS:
        out.append(Violation(
            rec.id, "lang",
            f"lang {rec.lang!r} not one of {'/'.join(KNOWN_LANGS)}",
        ))
    if rec.origin not in ORIGIN_CLASSES:
        out.append(Violation(
            rec.id, "origin",
            f"origin {rec.origin!r} not one of {'/'.join(ORIGIN_CLASSES)}",
        ))
    return out


def drop_invalid(corpus: Corpus, report: list[Violation]) -> Corpus:
    """Corpus without the records named in the validation report."""
    bad = {v.record_id for v in report}
    return Corpus(rec for rec in corpus if rec.id not in bad)


def filter_period(corpus: Corpus, period: PeriodFilter) -> Corpus:
    """View of the corpus restricted to papers inside the period (inclusive).

    The original corpus is left untouched; record objects are shared.
    """
    return Corpus(rec for rec in corpus if period.contains(rec.year))


@dataclass(frozen=True)
class CitationNeighborhood:
    """Partition of a seed set's surroundings inside the corpus.

    ``cited``: corpus papers referenced by a seed.  ``citing``: papers whose
    references include a seed.  ``coupled``: papers sharing at least one
    reference string with a seed.  Seeds themselves never appear; the three
    sets may overlap pairwise.
    """

    cited: frozenset[str]
    citing: frozenset[str]
    coupled: frozenset[str]


def citation_neighborhood(corpus: Corpus, seed_ids: Iterable[str]) -> CitationNeighborhood:
    seeds = set(seed_ids)
    unknown = sorted(seeds - set(corpus.papers))
    if unknown:
        raise ValueError(f"unknown seed id '{unknown[0]}'")
    seed_refs: set[str] = set()
    for sid in seeds:
        seed_refs.update(corpus.papers[sid].refs)
    cited = frozenset(r for r in seed_refs if r in corpus and r not in seeds)
    citing = frozenset(
        rec.id for rec in corpus
        if rec.id not in seeds and seeds.intersection(rec.refs)
    )
    coupled = frozenset(
        rec.id for rec in corpus
        if rec.id not in seeds and seed_refs.intersection(rec.refs)
    )
    return CitationNeighborhood(cited=cited, citing=citing, coupled=coupled)


def coupling_links(corpus: Corpus) -> list[CouplingLink]:
    """All bibliographic-coupling links, weight = number of shared references.

    One link per unordered pair sharing at least one reference, canonically
    oriented and sorted by (a, b).  Built through an inverted reference
    index, so the result is independent of record order.
    """
    ref_index: dict[str, list[str]] = {}
    for pid in sorted(corpus.papers):
        for ref in set(corpus.papers[pid].refs):
            ref_index.setdefault(ref, []).append(pid)
    weights: Counter[tuple[str, str]] = Counter()
    for pids in ref_index.values():
        # pids is already sorted: ids were inserted in sorted order
        for a, b in combinations(pids, 2):
            weights[(a, b)] += 1
    return [CouplingLink(a, b, w) for (a, b), w in sorted(weights.items())]
