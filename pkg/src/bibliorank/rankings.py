"""Top-k lists, the leadership reference line, institution composition
profiles and per-area noteworthy tables."""
from __future__ import annotations

from dataclasses import dataclass

from .normalize import CanonicalCorpus, normalize_key
from .scoring import Rule, ScoreTable, Subject, score_table

__all__ = [
    "RankingEntry",
    "CompositionProfile",
    "NoteworthyTable",
    "RankingError",
    "rank_top_k",
    "reference_line",
    "composition_profiles",
    "noteworthy_by_area",
    "area_matches",
]

TOP_LEVELS = (100, 300, 1000)


class RankingError(ValueError):
    pass


@dataclass(frozen=True)
class RankingEntry:
    rank: int
    name: str
    comprehensive: float
    leading: float | None = None


@dataclass(frozen=True)
class CompositionProfile:
    institution: str
    top100: int
    top300: int
    top1000: int
    total_scholars: int


@dataclass(frozen=True)
class NoteworthyTable:
    area: str
    scholars: tuple[RankingEntry, ...]
    institutions: tuple[RankingEntry, ...]
    n_records: int = 0


def rank_top_k(table: ScoreTable, k: int | None = None,
               leading: ScoreTable | None = None) -> list[RankingEntry]:
    """The `k` best entities of `table`, score descending, ties by name.

    `table` supplies the ordering. When `leading` is given, each entry also
    carries its leading-rule score (0 if absent from that table). Ranks are
    consecutive positions even across ties. ``k=None`` ranks everything.
    """
    if k is not None and k < 1:
        raise RankingError(f"k must be >= 1, got {k}")
    ordered = table.ranked()
    if k is not None:
        ordered = ordered[:k]
    return [
        RankingEntry(pos, name, h / 2, None if leading is None else leading.get(name))
        for pos, (name, h) in enumerate(ordered, 1)
    ]


def reference_line(leading_table: ScoreTable, k: int = 20) -> float:
    """Score of the k-th entity under its own ranking; the minimum if fewer than k."""
    if not len(leading_table):
        raise RankingError("reference line of an empty table")
    if k < 1:
        raise RankingError(f"k must be >= 1, got {k}")
    return rank_top_k(leading_table, k)[-1].comprehensive


def composition_profiles(corpus: CanonicalCorpus, scholar_table: ScoreTable,
                         institutions: list[str],
                         levels: tuple[int, int, int] = TOP_LEVELS) -> list[CompositionProfile]:
    """Count each institution's affiliated scholars at several global rank levels.

    A scholar is affiliated with an institution when some record lists
    both. Global ranks come from `scholar_table` (tie-broken by name).
    """
    known = corpus.institution_names
    unknown = [i for i in institutions if i not in known]
    if unknown:
        raise RankingError(f"unknown institution(s): {', '.join(unknown)}")
    members: dict[str, set[str]] = {i: set() for i in institutions}
    for rec in corpus.records:
        names = {a.name for a in rec.authors}
        for inst in rec.institutions:
            if inst in members:
                members[inst].update(names)
    rank_of = {e.name: e.rank for e in rank_top_k(scholar_table)}
    out = []
    for inst in institutions:
        ranks = [rank_of.get(s) for s in members[inst]]
        ranks = [r for r in ranks if r is not None]
        counts = [sum(r <= lvl for r in ranks) for lvl in levels]
        out.append(CompositionProfile(inst, *counts, total_scholars=len(members[inst])))
    return out


def area_matches(area: str):
    """Predicate selecting records whose macro keywords include `area`.

    `area` may be the full ``code term`` key or the bare term.
    """
    key = normalize_key(area)

    def keep(rec) -> bool:
        return any(normalize_key(k) == key for k in rec.macro_keys) or any(
            normalize_key(t) == key for _, t in rec.macro_keywords
        )

    return keep


def noteworthy_by_area(corpus: CanonicalCorpus, area: str, n_scholars: int = 5,
                       n_institutions: int = 3) -> NoteworthyTable:
    """Re-score scholars and institutions on the papers of one macro area."""
    sub = corpus.restrict(area_matches(area))
    if not sub.records:
        return NoteworthyTable(area, (), (), 0)
    sch = score_table(sub.records, Subject.SCHOLAR, Rule.COMPREHENSIVE)
    sch_lead = score_table(sub.records, Subject.SCHOLAR, Rule.LEADING)
    inst = score_table(sub.records, Subject.INSTITUTION, Rule.COMPREHENSIVE)
    inst_lead = score_table(sub.records, Subject.INSTITUTION, Rule.LEADING)
    return NoteworthyTable(
        area,
        tuple(rank_top_k(sch, n_scholars, sch_lead)),
        tuple(rank_top_k(inst, n_institutions, inst_lead)),
        len(sub.records),
    )
