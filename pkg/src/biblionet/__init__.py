"""Corpus analysis toolkit: country activity and classification, keyword
co-occurrence networks with community hierarchies, and full-text themes,
behind a library, a CLI, and a read-only HTTP service."""

from .corpus import (
    CitationNeighborhood,
    Corpus,
    CorpusFormatError,
    CouplingLink,
    PaperRecord,
    PeriodFilter,
    Violation,
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
from .geo import (
    ContingencyTable,
    CountryActivity,
    CountryClassification,
    build_contingency,
    classify_countries,
    country_activity,
    representation_residuals,
    residual_label,
    themes_to_lexicons,
    trim_contingency,
)
from .network import (
    CommunityHierarchy,
    KeywordGraph,
    build_cooccurrence,
    cut_level,
    detect_communities,
    export_graph,
    layout,
    modularity,
    parse_graph,
)
from .text import (
    Gazetteer,
    Lexicon,
    TermVector,
    detect_studied_countries,
    lexicon_counts,
    load_gazetteer,
    load_lexicons,
    tokenize,
    vectorize_tfidf,
)
from .themes import ThemeModel, WordCloud, extract_themes, word_cloud

__version__ = "0.1.0"

__all__ = [
    "CitationNeighborhood",
    "CommunityHierarchy",
    "ContingencyTable",
    "Corpus",
    "CorpusFormatError",
    "CountryActivity",
    "CountryClassification",
    "CouplingLink",
    "Gazetteer",
    "KeywordGraph",
    "Lexicon",
    "PaperRecord",
    "PeriodFilter",
    "TermVector",
    "ThemeModel",
    "Violation",
    "WordCloud",
    "build_contingency",
    "build_cooccurrence",
    "citation_neighborhood",
    "classify_countries",
    "country_activity",
    "coupling_links",
    "cut_level",
    "detect_communities",
    "detect_studied_countries",
    "drop_invalid",
    "dump_corpus",
    "export_graph",
    "extract_themes",
    "filter_period",
    "layout",
    "lexicon_counts",
    "load_corpus",
    "load_gazetteer",
    "load_lexicons",
    "modularity",
    "normalize_keywords",
    "parse_graph",
    "representation_residuals",
    "residual_label",
    "save_corpus",
    "themes_to_lexicons",
    "tokenize",
    "trim_contingency",
    "validate_corpus",
    "vectorize_tfidf",
    "word_cloud",
]
