"""Alias resolution and per-paper de-duplication.

Raw strings are reduced to a lookup key (whitespace collapsed, case-folded)
before consulting an alias map. A map also answers for its own canonical
names, which is what makes :func:`canonicalize` idempotent.

Alias map files are tab-separated ``kind, raw, canonical`` rows; ``#``
starts a comment line.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import IO, Callable, Iterable, Sequence

from .records import Authorship, Corpus, PaperRecord, PublicationRegistry

__all__ = [
    "AliasKind",
    "Policy",
    "AliasMap",
    "AliasConfigError",
    "CanonicalRecord",
    "CanonicalCorpus",
    "Dropped",
    "normalize_key",
    "load_alias_maps",
    "canonicalize",
    "dedupe_within_paper",
]

log = logging.getLogger(__name__)


class AliasConfigError(ValueError):
    """Alias maps are inconsistent (chains, colliding canonical names, bad rows)."""


class AliasKind(str, Enum):
    SCHOLAR = "scholar"
    INSTITUTION = "institution"
    COUNTRY = "country"
    KEYWORD = "keyword"


class Policy(str, Enum):
    STRICT = "strict"
    PASSTHROUGH = "passthrough"


def normalize_key(text: str) -> str:
    return " ".join(text.split()).casefold()


class AliasMap:
    """Raw-string to canonical-name lookup for one entity kind."""

    def __init__(self, kind: AliasKind | str, entries: dict[str, str] | Iterable[tuple[str, str]] = ()):
        self.kind = AliasKind(kind)
        pairs = entries.items() if isinstance(entries, dict) else entries
        self._lookup: dict[str, str] = {}
        canon_by_key: dict[str, str] = {}
        raw_pairs = []
        for raw, canonical in pairs:
            canonical = " ".join(canonical.split())
            if not canonical or not raw.strip():
                raise AliasConfigError(f"{self.kind.value} alias with empty side: {raw!r} -> {canonical!r}")
            ck = normalize_key(canonical)
            if canon_by_key.setdefault(ck, canonical) != canonical:
                raise AliasConfigError(
                    f"{self.kind.value}: canonical names {canon_by_key[ck]!r} and {canonical!r} collide"
                )
            raw_pairs.append((normalize_key(raw), canonical))
        for rk, canonical in raw_pairs:
            target = canon_by_key.get(rk)
            if target is not None and target != canonical:
                raise AliasConfigError(
                    f"{self.kind.value}: alias chain, {rk!r} is canonical {target!r} "
                    f"but also maps to {canonical!r}"
                )
            prev = self._lookup.setdefault(rk, canonical)
            if prev != canonical:
                raise AliasConfigError(f"{self.kind.value}: {rk!r} maps to both {prev!r} and {canonical!r}")
        for ck, canonical in canon_by_key.items():
            self._lookup.setdefault(ck, canonical)

    def get(self, raw: str) -> str | None:
        return self._lookup.get(normalize_key(raw))

    def __len__(self) -> int:
        return len(self._lookup)

    @property
    def entries(self) -> dict[str, str]:
        return dict(self._lookup)

    def rows(self) -> list[tuple[str, str, str]]:
        return sorted((self.kind.value, k, v) for k, v in self._lookup.items())


def load_alias_maps(source: str | Path | IO[str]) -> list[AliasMap]:
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()
    grouped: dict[AliasKind, list[tuple[str, str]]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        cells = raw.split("\t")
        if len(cells) != 3:
            raise AliasConfigError(f"alias line {lineno}: expected 3 tab-separated fields, got {len(cells)}")
        kind, alias, canonical = (c.strip() for c in cells)
        if kind.lower() == "kind" and alias.lower() == "raw":
            continue
        try:
            k = AliasKind(kind.lower())
        except ValueError:
            raise AliasConfigError(f"alias line {lineno}: unknown kind {kind!r}") from None
        grouped.setdefault(k, []).append((alias, canonical))
    return [AliasMap(k, pairs) for k, pairs in sorted(grouped.items(), key=lambda kv: kv[0].value)]


@dataclass(frozen=True)
class CanonicalRecord:
    """A record after alias resolution.

    Institutions and countries are kept as separate ordered lists because
    de-duplication applies to each on its own. An institution slot is
    ``None`` when strict filtering dropped it; the slot keeps its position
    so that nobody inherits its share.
    """

    title: str
    publication_id: str
    year: int
    basic_score: int
    authors: tuple[Authorship, ...]
    institutions: tuple[str | None, ...]
    countries: tuple[str, ...]
    macro_keywords: tuple[tuple[str, str], ...] = ()
    micro_keywords: tuple[str, ...] = ()

    @property
    def macro_keys(self) -> tuple[str, ...]:
        return tuple(macro_key(c, t) for c, t in self.macro_keywords)


def macro_key(code: str, term: str) -> str:
    return f"{code} {term}" if code else term


@dataclass(frozen=True)
class Dropped:
    record: int
    field: str
    raw: str


@dataclass(frozen=True)
class CanonicalCorpus:
    registry: PublicationRegistry
    records: tuple[CanonicalRecord, ...]
    window: tuple[int, int]
    dropped: tuple[Dropped, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "records", tuple(self.records))
        object.__setattr__(self, "dropped", tuple(self.dropped))

    def __len__(self) -> int:
        return len(self.records)

    def restrict(self, keep: Callable[[CanonicalRecord], bool]) -> "CanonicalCorpus":
        """Sub-corpus of the records satisfying `keep`. The dropped log is not carried over."""
        return replace(self, records=tuple(r for r in self.records if keep(r)), dropped=())

    @property
    def years(self) -> list[int]:
        return list(range(self.window[0], self.window[1] + 1))

    @property
    def institution_names(self) -> set[str]:
        return {i for r in self.records for i in r.institutions if i is not None}


class _Resolver:
    def __init__(self, maps: Sequence[AliasMap]):
        self.maps: dict[AliasKind, AliasMap] = {}
        for m in maps:
            if m.kind in self.maps:
                merged = list(self.maps[m.kind].entries.items()) + list(m.entries.items())
                self.maps[m.kind] = AliasMap(m.kind, merged)
            else:
                self.maps[m.kind] = m

    def resolve(self, kind: AliasKind, raw: str) -> str | None:
        m = self.maps.get(kind)
        return m.get(raw) if m is not None else None

    def passthrough(self, kind: AliasKind, raw: str) -> str:
        hit = self.resolve(kind, raw)
        return hit if hit is not None else normalize_key(raw)


def _canon(rec: CanonicalRecord | PaperRecord, idx: int, registry: PublicationRegistry,
           res: _Resolver, policy: Policy, dropped: list[Dropped]) -> CanonicalRecord:
    if isinstance(rec, PaperRecord):
        inst_raw: list[str | None] = [f.institution for f in rec.affiliations]
        countries_raw = [f.country for f in rec.affiliations]
        score = registry.score_of(rec.publication_id)
    else:
        inst_raw = list(rec.institutions)
        countries_raw = list(rec.countries)
        score = rec.basic_score

    institutions: list[str | None] = []
    for raw in inst_raw:
        if raw is None:
            institutions.append(None)
            continue
        hit = res.resolve(AliasKind.INSTITUTION, raw)
        if hit is None and policy is Policy.STRICT:
            dropped.append(Dropped(idx, "institution", raw))
            institutions.append(None)
        else:
            institutions.append(hit if hit is not None else normalize_key(raw))

    return CanonicalRecord(
        title=rec.title,
        publication_id=rec.publication_id,
        year=rec.year,
        basic_score=score,
        authors=tuple(Authorship(res.passthrough(AliasKind.SCHOLAR, a.name), a.corresponding)
                      for a in rec.authors),
        institutions=tuple(institutions),
        countries=tuple(res.passthrough(AliasKind.COUNTRY, c) for c in countries_raw),
        macro_keywords=tuple((" ".join(code.split()), res.passthrough(AliasKind.KEYWORD, term))
                             for code, term in rec.macro_keywords),
        micro_keywords=tuple(res.passthrough(AliasKind.KEYWORD, k) for k in rec.micro_keywords),
    )


def canonicalize(
    corpus: Corpus | CanonicalCorpus,
    maps: Sequence[AliasMap] = (),
    policy: Policy | str = Policy.PASSTHROUGH,
    dedupe: bool = True,
) -> CanonicalCorpus:
    """Replace every raw name by its canonical form.

    Under the strict policy an institution that no map recognises is
    dropped and logged in ``dropped``; scholars, countries and keywords
    always fall back to their normalized key. Records are de-duplicated
    with :func:`dedupe_within_paper` unless `dedupe` is false.
    """
    policy = Policy(policy)
    res = _Resolver(maps)
    dropped: list[Dropped] = list(corpus.dropped) if isinstance(corpus, CanonicalCorpus) else []
    records = []
    for i, rec in enumerate(corpus.records):
        c = _canon(rec, i, corpus.registry, res, policy, dropped)
        records.append(dedupe_within_paper(c) if dedupe else c)
    if len(dropped) and policy is Policy.STRICT:
        log.info("strict filtering dropped %d institution strings", len(dropped))
    return CanonicalCorpus(corpus.registry, tuple(records), corpus.window, tuple(dropped))


def _first_occurrences(items):
    seen = set()
    out = []
    for it in items:
        if it is None:
            out.append(it)
        elif it not in seen:
            seen.add(it)
            out.append(it)
    return tuple(out)


def dedupe_within_paper(record: CanonicalRecord) -> CanonicalRecord:
    """Keep the first occurrence of each institution, country and keyword.

    Authors are never de-duplicated. Dropped institution slots stay put.
    """
    return replace(
        record,
        institutions=_first_occurrences(record.institutions),
        countries=_first_occurrences(record.countries),
        macro_keywords=_first_occurrences(record.macro_keywords),
        micro_keywords=_first_occurrences(record.micro_keywords),
    )
