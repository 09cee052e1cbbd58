"""Counting schemes for scholars, institutions, countries and keywords.

Scores are held as integer half-points (score x 2). The only fractional
share any rule hands out is half of a basic score, so this keeps every
sum exact and independent of record order.

Comprehensive rule
    A sole author/institution/country gets the basic score ``s``. On a
    multi-party paper the leaders get ``s`` and everyone else ``s/2``.
    Scholar leaders are the first author plus any author flagged
    corresponding; the institution/country leader is the first one listed.

Leading rule
    As above, except non-leaders get nothing.

Keywords
    Every distinct keyword on a paper gets ``s``.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .normalize import CanonicalCorpus, CanonicalRecord

__all__ = [
    "Rule",
    "Subject",
    "ScoreTable",
    "ScoringError",
    "record_contributions",
    "score_table",
    "score_scholars",
    "score_institutions",
    "score_countries",
    "score_keywords",
    "EntityScorer",
]

log = logging.getLogger(__name__)


class ScoringError(ValueError):
    """A record violates a scoring precondition."""


class Rule(str, Enum):
    COMPREHENSIVE = "comprehensive"
    LEADING = "leading"


class Subject(str, Enum):
    SCHOLAR = "scholar"
    INSTITUTION = "institution"
    COUNTRY = "country"
    MACRO_KEYWORD = "macro_keyword"
    MICRO_KEYWORD = "micro_keyword"


@dataclass(frozen=True)
class ScoreTable:
    """Canonical name -> score, stored in half-points."""

    subject: Subject
    rule: Rule
    halves: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "subject", Subject(self.subject))
        object.__setattr__(self, "rule", Rule(self.rule))
        for name, v in self.halves.items():
            if not isinstance(v, (int, np.integer)) or v < 0:
                raise ValueError(f"score for {name!r} must be a non-negative half-point integer, got {v!r}")

    def __getitem__(self, name: str) -> float:
        return self.halves[name] / 2

    def get(self, name: str, default: float = 0.0) -> float:
        return self.halves[name] / 2 if name in self.halves else default

    def __contains__(self, name: object) -> bool:
        return name in self.halves

    def __len__(self) -> int:
        return len(self.halves)

    def __iter__(self) -> Iterator[str]:
        return iter(self.halves)

    def items(self) -> Iterator[tuple[str, float]]:
        for k, v in self.halves.items():
            yield k, v / 2

    @property
    def total(self) -> float:
        return sum(self.halves.values()) / 2

    def ranked(self) -> list[tuple[str, int]]:
        """(name, half-points) sorted by score descending, name ascending."""
        return sorted(self.halves.items(), key=lambda kv: (-kv[1], kv[0]))

    def __add__(self, other: "ScoreTable") -> "ScoreTable":
        if (self.subject, self.rule) != (other.subject, other.rule):
            raise ValueError("cannot merge tables of different subject or rule")
        merged = Counter(self.halves)
        merged.update(other.halves)
        return ScoreTable(self.subject, self.rule, dict(merged))


def _positional(names: tuple[str | None, ...], s2: int, rule: Rule) -> Iterator[tuple[str, int]]:
    # first slot leads; a None slot was dropped by strict filtering
    if len(names) == 1:
        if names[0] is not None:
            yield names[0], s2
        return
    share = s2 // 2 if rule is Rule.COMPREHENSIVE else 0
    for pos, name in enumerate(names):
        if name is not None:
            yield name, s2 if pos == 0 else share


def _scholar_contributions(rec: CanonicalRecord, s2: int, rule: Rule) -> Iterator[tuple[str, int]]:
    authors = rec.authors
    if not authors:
        raise ScoringError(f"record {rec.title!r} has no authors")
    if len(authors) == 1:
        yield authors[0].name, s2
        return
    flagged = [i for i, a in enumerate(authors) if a.corresponding]
    if len(flagged) > 1:
        log.warning("record %r marks %d corresponding authors; all are treated as leaders",
                    rec.title, len(flagged))
    leaders = {0, *flagged}
    share = s2 // 2 if rule is Rule.COMPREHENSIVE else 0
    for pos, a in enumerate(authors):
        yield a.name, s2 if pos in leaders else share


def record_contributions(rec: CanonicalRecord, subject: Subject | str,
                         rule: Rule | str = Rule.COMPREHENSIVE) -> list[tuple[str, int]]:
    """Half-point credits one record hands out under `subject` and `rule`.

    Keyword subjects ignore `rule`.
    """
    subject, rule = Subject(subject), Rule(rule)
    s2 = 2 * rec.basic_score
    if subject is Subject.SCHOLAR:
        return list(_scholar_contributions(rec, s2, rule))
    if subject is Subject.INSTITUTION:
        if not rec.institutions:
            raise ScoringError(f"record {rec.title!r} has no affiliations")
        return list(_positional(rec.institutions, s2, rule))
    if subject is Subject.COUNTRY:
        if not rec.countries:
            raise ScoringError(f"record {rec.title!r} has no countries")
        return list(_positional(rec.countries, s2, rule))
    keys = rec.macro_keys if subject is Subject.MACRO_KEYWORD else rec.micro_keywords
    return [(k, s2) for k in dict.fromkeys(keys)]


def score_table(records: Iterable[CanonicalRecord], subject: Subject | str,
                rule: Rule | str = Rule.COMPREHENSIVE) -> ScoreTable:
    subject, rule = Subject(subject), Rule(rule)
    if subject in (Subject.MACRO_KEYWORD, Subject.MICRO_KEYWORD):
        rule = Rule.COMPREHENSIVE
    totals: Counter[str] = Counter()
    for rec in records:
        for name, h in record_contributions(rec, subject, rule):
            totals[name] += h
    return ScoreTable(subject, rule, dict(totals))


def score_scholars(corpus: CanonicalCorpus, rule: Rule | str = Rule.COMPREHENSIVE) -> ScoreTable:
    return score_table(corpus.records, Subject.SCHOLAR, rule)


def score_institutions(corpus: CanonicalCorpus, rule: Rule | str = Rule.COMPREHENSIVE) -> ScoreTable:
    return score_table(corpus.records, Subject.INSTITUTION, rule)


def score_countries(corpus: CanonicalCorpus, rule: Rule | str = Rule.COMPREHENSIVE) -> ScoreTable:
    return score_table(corpus.records, Subject.COUNTRY, rule)


def score_keywords(corpus: CanonicalCorpus, level: str = "micro") -> ScoreTable:
    if level not in ("macro", "micro"):
        raise ValueError(f"keyword level must be 'macro' or 'micro', got {level!r}")
    subject = Subject.MACRO_KEYWORD if level == "macro" else Subject.MICRO_KEYWORD
    return score_table(corpus.records, subject)


class EntityScorer(BaseEstimator):
    """Estimator wrapper around the counting schemes.

    ``fit`` scores a canonical corpus and keeps the table; ``predict``
    looks up scores for names (0 for unseen names); ``transform`` scores a
    different corpus with the same configuration.

    Parameters
    ----------
    subject : {'scholar', 'institution', 'country', 'macro_keyword', 'micro_keyword'}
    rule : {'comprehensive', 'leading'}
    """

    def __init__(self, subject="scholar", rule="comprehensive"):
        self.subject = subject
        self.rule = rule

    def fit(self, corpus: CanonicalCorpus, y=None):
        self.table_ = score_table(corpus.records, self.subject, self.rule)
        self.n_records_ = len(corpus.records)
        return self

    def transform(self, corpus: CanonicalCorpus) -> ScoreTable:
        return score_table(corpus.records, self.subject, self.rule)

    def predict(self, names: Iterable[str]) -> np.ndarray:
        check_is_fitted(self, "table_")
        return np.array([self.table_.get(n) for n in names], dtype=float)

    def ranking(self) -> list[tuple[str, float]]:
        check_is_fitted(self, "table_")
        return [(n, h / 2) for n, h in self.table_.ranked()]
