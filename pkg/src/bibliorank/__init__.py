"""Bibliometric assessment: publication-tier counting schemes, rankings,
keyword trends, rank-score curve fits and data-error impact bounds."""

__version__ = "0.1.0"

from .normalize import AliasMap, CanonicalCorpus, Policy, canonicalize, dedupe_within_paper, load_alias_maps
from .rankings import (
    composition_profiles,
    noteworthy_by_area,
    rank_top_k,
    reference_line,
)
from .records import (
    Corpus,
    PaperRecord,
    Publication,
    PublicationRegistry,
    basic_score,
    build_corpus,
    filter_research,
    load_registry,
    parse_records,
    read_records,
    serialize_records,
)
from .scoring import (
    EntityScorer,
    Rule,
    ScoreTable,
    Subject,
    score_countries,
    score_institutions,
    score_keywords,
    score_scholars,
)
from .stats import (
    BestCurveFit,
    CurveFit,
    ErrorModel,
    RankScoreSeries,
    best_fit,
    error_probability_bound,
    error_probability_exact,
    fit_family,
)
from .trends import TrendSeries, stack_cumulate, trend_series

__all__ = [
    "__version__",
    "AliasMap",
    "CanonicalCorpus",
    "Policy",
    "canonicalize",
    "dedupe_within_paper",
    "load_alias_maps",
    "composition_profiles",
    "noteworthy_by_area",
    "rank_top_k",
    "reference_line",
    "Corpus",
    "PaperRecord",
    "Publication",
    "PublicationRegistry",
    "basic_score",
    "build_corpus",
    "filter_research",
    "load_registry",
    "parse_records",
    "read_records",
    "serialize_records",
    "EntityScorer",
    "Rule",
    "ScoreTable",
    "Subject",
    "score_countries",
    "score_institutions",
    "score_keywords",
    "score_scholars",
    "BestCurveFit",
    "CurveFit",
    "ErrorModel",
    "RankScoreSeries",
    "best_fit",
    "error_probability_bound",
    "error_probability_exact",
    "fit_family",
    "TrendSeries",
    "stack_cumulate",
    "trend_series",
]
