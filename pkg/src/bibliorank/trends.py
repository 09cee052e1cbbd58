"""Per-year keyword trend matrices.

Rows are keywords ordered by their whole-window score (ties by name);
columns are the years of the corpus window. In ``score`` mode a cell is
the keyword's score on that year's papers, kept in half-points; in
``percent`` mode it is that score as a share of the year's total over
every keyword of the level, not only the rows kept.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace

import numpy as np

from .normalize import CanonicalCorpus
from .scoring import Subject, record_contributions

__all__ = ["TrendSeries", "trend_series", "stack_cumulate"]

_LEVEL_SUBJECT = {"macro": Subject.MACRO_KEYWORD, "micro": Subject.MICRO_KEYWORD}


@dataclass(frozen=True, eq=False)
class TrendSeries:
    level: str
    mode: str
    years: tuple[int, ...]
    keywords: tuple[str, ...]
    values: np.ndarray
    stacked: bool = False

    def __post_init__(self) -> None:
        if self.values.shape != (len(self.keywords), len(self.years)):
            raise ValueError(
                f"values shape {self.values.shape} does not match "
                f"{len(self.keywords)} keywords x {len(self.years)} years"
            )

    def scores(self) -> np.ndarray:
        """Cell values in score units (percent mode is returned unchanged)."""
        if self.mode == "score":
            return self.values / 2.0
        return self.values.astype(float)

    def row(self, keyword: str) -> np.ndarray:
        return self.scores()[self.keywords.index(keyword)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TrendSeries):
            return NotImplemented
        return (
            (self.level, self.mode, self.years, self.keywords, self.stacked)
            == (other.level, other.mode, other.years, other.keywords, other.stacked)
            and np.array_equal(self.values, other.values)
        )


def trend_series(corpus: CanonicalCorpus, level: str = "macro", mode: str = "score",
                 top_k: int | None = 20) -> TrendSeries:
    """Build the keyword-by-year matrix for one keyword level.

    ``top_k=None`` keeps every keyword seen in the window.
    """
    if level not in _LEVEL_SUBJECT:
        raise ValueError(f"level must be 'macro' or 'micro', got {level!r}")
    if mode not in ("score", "percent"):
        raise ValueError(f"mode must be 'score' or 'percent', got {mode!r}")
    if top_k is not None and top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    subject = _LEVEL_SUBJECT[level]
    years = tuple(corpus.years)
    col = {y: j for j, y in enumerate(years)}

    per_year: dict[int, Counter[str]] = {y: Counter() for y in years}
    for rec in corpus.records:
        for name, h in record_contributions(rec, subject):
            per_year[rec.year][name] += h
    window_total: Counter[str] = Counter()
    for c in per_year.values():
        window_total.update(c)

    ranked = sorted(window_total.items(), key=lambda kv: (-kv[1], kv[0]))
    if top_k is not None:
        ranked = ranked[:top_k]
    keywords = tuple(k for k, _ in ranked)

    halves = np.zeros((len(keywords), len(years)), dtype=np.int64)
    for i, kw in enumerate(keywords):
        for y, c in per_year.items():
            halves[i, col[y]] = c.get(kw, 0)
    if mode == "score":
        values = halves
    else:
        totals = np.array([sum(per_year[y].values()) for y in years], dtype=float)
        values = np.divide(halves * 100.0, totals, out=np.zeros(halves.shape), where=totals > 0)
    return TrendSeries(level, mode, years, keywords, values)


def stack_cumulate(series: TrendSeries) -> TrendSeries:
    """Stack rows within each year: row i becomes the sum of rows 0..i."""
    if series.stacked:
        raise ValueError("series is already stacked")
    return replace(series, values=np.cumsum(series.values, axis=0), stacked=True)
