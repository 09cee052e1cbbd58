"""Corpus data model and bibliographic input parsing.

Two input formats are understood:

``lines``
    UTF-8, one JSON object per line with the keys ``title``,
    ``publication_id``, ``year``, ``authors``, ``affiliations``,
    ``macro_keywords``, ``micro_keywords`` and ``kind``.

``xml``
    A single root element holding ``<paper>`` elements::

        <paper year="2010" pub="TSE" kind="research">
          <title>...</title>
          <author corresponding="true">...</author>
          <affil institution="..." country="..."/>
          <class code="..." term="..."/>
          <kw>...</kw>
        </paper>

The publication registry is a tab-separated table ``id, name, kind, class``.
Basic scores are derived from ``(kind, class)`` and never stored.
"""
from __future__ import annotations

import io
import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Iterator, Sequence

__all__ = [
    "Kind",
    "PubClass",
    "PaperKind",
    "Publication",
    "PublicationRegistry",
    "Authorship",
    "Affiliation",
    "PaperRecord",
    "Corpus",
    "RecordError",
    "RegistryError",
    "BASIC_SCORES",
    "basic_score",
    "parse_records",
    "serialize_records",
    "read_records",
    "filter_research",
    "load_registry",
    "build_corpus",
]


class RecordError(ValueError):
    """Malformed bibliographic input."""


class RegistryError(ValueError):
    """Invalid publication registry content or unresolved publication id."""


class Kind(str, Enum):
    JOURNAL = "journal"
    CONFERENCE = "conference"


class PubClass(str, Enum):
    A = "A"
    B = "B"
    C = "C"


class PaperKind(str, Enum):
    RESEARCH = "research"
    EDITORIAL = "editorial"
    SHORT = "short"
    INDUSTRY = "industry"
    OTHER = "other"


# Publication-tier basic scores. Conference class C has no score.
BASIC_SCORES: dict[tuple[Kind, PubClass], int] = {
    (Kind.JOURNAL, PubClass.A): 10,
    (Kind.JOURNAL, PubClass.B): 5,
    (Kind.JOURNAL, PubClass.C): 2,
    (Kind.CONFERENCE, PubClass.A): 6,
    (Kind.CONFERENCE, PubClass.B): 3,
}


@dataclass(frozen=True)
class Publication:
    id: str
    name: str
    kind: Kind
    pub_class: PubClass

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "pub_class", PubClass(self.pub_class))
        if not self.id or any(c.isspace() for c in self.id):
            raise RegistryError(f"publication id must be a non-empty token, got {self.id!r}")
        if (self.kind, self.pub_class) not in BASIC_SCORES:
            raise RegistryError(
                f"publication {self.id!r}: no basic score for "
                f"({self.kind.value}, {self.pub_class.value})"
            )

    @property
    def basic_score(self) -> int:
        return BASIC_SCORES[(self.kind, self.pub_class)]


def basic_score(pub: Publication) -> int:
    """Return the integer basic score of a publication's tier."""
    return BASIC_SCORES[(Kind(pub.kind), PubClass(pub.pub_class))]


class PublicationRegistry:
    """Id-unique collection of publications."""

    def __init__(self, publications: Iterable[Publication] = ()):
        self._pubs: dict[str, Publication] = {}
        for pub in publications:
            if pub.id in self._pubs:
                raise RegistryError(f"duplicate publication id {pub.id!r}")
            self._pubs[pub.id] = pub

    def __getitem__(self, pub_id: str) -> Publication:
        try:
            return self._pubs[pub_id]
        except KeyError:
            raise RegistryError(f"unknown publication_id {pub_id!r}") from None

    def __contains__(self, pub_id: object) -> bool:
        return pub_id in self._pubs

    def __iter__(self) -> Iterator[Publication]:
        return iter(self._pubs.values())

    def __len__(self) -> int:
        return len(self._pubs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PublicationRegistry) and self._pubs == other._pubs

    def score_of(self, pub_id: str) -> int:
        return self[pub_id].basic_score

    def to_tsv(self) -> str:
        lines = ["id\tname\tkind\tclass"]
        for pub in sorted(self._pubs.values(), key=lambda p: p.id):
            lines.append(f"{pub.id}\t{pub.name}\t{pub.kind.value}\t{pub.pub_class.value}")
        return "\n".join(lines) + "\n"


def load_registry(source: str | Path | IO[str]) -> PublicationRegistry:
    """Read a tab-separated registry. Blank lines and ``#`` comments are skipped."""
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()
    pubs = []
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cells = [c.strip() for c in raw.split("\t")]
        if not header_seen and [c.lower() for c in cells] == ["id", "name", "kind", "class"]:
            header_seen = True
            continue
        header_seen = True
        if len(cells) != 4:
            raise RegistryError(f"registry line {lineno}: expected 4 tab-separated fields, got {len(cells)}")
        pub_id, name, kind, klass = cells
        try:
            pubs.append(Publication(pub_id, name, Kind(kind.lower()), PubClass(klass.upper())))
        except ValueError as exc:
            raise RegistryError(f"registry line {lineno}: {exc}") from None
    return PublicationRegistry(pubs)


@dataclass(frozen=True)
class Authorship:
    name: str
    corresponding: bool = False

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not self.name.strip():
            raise RecordError("author name must be non-empty")


@dataclass(frozen=True)
class Affiliation:
    institution: str
    country: str

    def __post_init__(self) -> None:
        if not isinstance(self.institution, str) or not self.institution.strip():
            raise RecordError("affiliation institution must be non-empty")
        if not isinstance(self.country, str) or not self.country.strip():
            raise RecordError("affiliation country must be non-empty")


@dataclass(frozen=True)
class PaperRecord:
    """One paper as ingested. Author and affiliation order is significant:
    position 0 is the first author / first institution."""

    title: str
    publication_id: str
    year: int
    authors: tuple[Authorship, ...]
    affiliations: tuple[Affiliation, ...]
    macro_keywords: tuple[tuple[str, str], ...] = ()
    micro_keywords: tuple[str, ...] = ()
    kind: PaperKind = PaperKind.RESEARCH

    def __post_init__(self) -> None:
        object.__setattr__(self, "authors", tuple(self.authors))
        object.__setattr__(self, "affiliations", tuple(self.affiliations))
        object.__setattr__(self, "macro_keywords", tuple(tuple(m) for m in self.macro_keywords))
        object.__setattr__(self, "micro_keywords", tuple(self.micro_keywords))
        object.__setattr__(self, "kind", PaperKind(self.kind))
        if not self.authors:
            raise RecordError("record has no authors")
        if not self.affiliations:
            raise RecordError("record has no affiliations")

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "publication_id": self.publication_id,
            "year": self.year,
            "authors": [{"name": a.name, "corresponding": a.corresponding} for a in self.authors],
            "affiliations": [
                {"institution": f.institution, "country": f.country} for f in self.affiliations
            ],
            "macro_keywords": [{"code": c, "term": t} for c, t in self.macro_keywords],
            "micro_keywords": list(self.micro_keywords),
            "kind": self.kind.value,
        }


@dataclass(frozen=True)
class Corpus:
    registry: PublicationRegistry
    records: tuple[PaperRecord, ...]
    window: tuple[int, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "records", tuple(self.records))
        start, end = self.window
        if start > end:
            raise ValueError(f"empty window {start}:{end}")
        for i, rec in enumerate(self.records):
            if rec.publication_id not in self.registry:
                raise RegistryError(f"record {i}: unknown publication_id {rec.publication_id!r}")
            if not start <= rec.year <= end:
                raise RecordError(f"record {i}: year {rec.year} outside window {start}:{end}")


_FIELDS = (
    "title",
    "publication_id",
    "year",
    "authors",
    "affiliations",
    "macro_keywords",
    "micro_keywords",
    "kind",
)


def _require(obj: dict, key: str, typ: type | tuple, where: str):
    if key not in obj:
        raise RecordError(f"{where}: missing field {key!r}")
    value = obj[key]
    # bool is an int subclass; a year of `true` is not a year
    if not isinstance(value, typ) or (typ is int and isinstance(value, bool)):
        raise RecordError(f"{where}: field {key!r} has wrong type {type(value).__name__}")
    return value


def _record_from_dict(obj: dict, where: str) -> PaperRecord:
    if not isinstance(obj, dict):
        raise RecordError(f"{where}: entry is not an object")
    unknown = set(obj) - set(_FIELDS)
    if unknown:
        raise RecordError(f"{where}: unknown field(s) {sorted(unknown)}")
    title = _require(obj, "title", str, where)
    pub = _require(obj, "publication_id", str, where)
    year = _require(obj, "year", int, where)
    authors = []
    for j, a in enumerate(_require(obj, "authors", list, where)):
        w = f"{where}, authors[{j}]"
        if not isinstance(a, dict):
            raise RecordError(f"{w}: expected object")
        name = _require(a, "name", str, w)
        corr = a.get("corresponding", False)
        if not isinstance(corr, bool):
            raise RecordError(f"{w}: field 'corresponding' must be boolean")
        try:
            authors.append(Authorship(name, corr))
        except RecordError as exc:
            raise RecordError(f"{w}: {exc}") from None
    affils = []
    for j, f in enumerate(_require(obj, "affiliations", list, where)):
        w = f"{where}, affiliations[{j}]"
        if not isinstance(f, dict):
            raise RecordError(f"{w}: expected object")
        try:
            affils.append(Affiliation(_require(f, "institution", str, w), _require(f, "country", str, w)))
        except RecordError as exc:
            raise RecordError(f"{w}: {exc}") from None
    macros = []
    for j, m in enumerate(_require(obj, "macro_keywords", list, where)):
        w = f"{where}, macro_keywords[{j}]"
        if not isinstance(m, dict):
            raise RecordError(f"{w}: expected object")
        macros.append((_require(m, "code", str, w), _require(m, "term", str, w)))
    micros = _require(obj, "micro_keywords", list, where)
    if not all(isinstance(k, str) for k in micros):
        raise RecordError(f"{where}: field 'micro_keywords' must hold strings")
    kind = _require(obj, "kind", str, where)
    try:
        kind = PaperKind(kind)
    except ValueError:
        raise RecordError(f"{where}: field 'kind' has unknown value {kind!r}") from None
    if not authors:
        raise RecordError(f"{where}: field 'authors' is empty")
    if not affils:
        raise RecordError(f"{where}: field 'affiliations' is empty")
    return PaperRecord(title, pub, year, tuple(authors), tuple(affils), tuple(macros), tuple(micros), kind)


def _parse_lines(text: str) -> list[PaperRecord]:
    records = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise RecordError(f"line {lineno}: invalid JSON ({exc.msg})") from None
        records.append(_record_from_dict(obj, f"line {lineno}"))
    return records


def _xml_bool(value: str | None, where: str) -> bool:
    if value is None or value == "false":
        return False
    if value == "true":
        return True
    raise RecordError(f"{where}: attribute 'corresponding' must be 'true' or 'false', got {value!r}")


def _parse_xml(data: bytes) -> list[PaperRecord]:
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise RecordError(f"XML not well-formed: {exc}") from None
    records = []
    for idx, paper in enumerate(root, 1):
        where = f"<paper> #{idx}"
        if paper.tag != "paper":
            raise RecordError(f"element #{idx}: expected <paper>, got <{paper.tag}>")
        year_attr = paper.get("year")
        try:
            year = int(year_attr)
        except (TypeError, ValueError):
            raise RecordError(f"{where}: attribute 'year' must be an integer, got {year_attr!r}") from None
        obj: dict = {
            "title": None,
            "publication_id": paper.get("pub"),
            "year": year,
            "authors": [],
            "affiliations": [],
            "macro_keywords": [],
            "micro_keywords": [],
            "kind": paper.get("kind", "research"),
        }
        if obj["publication_id"] is None:
            raise RecordError(f"{where}: missing attribute 'pub'")
        for child in paper:
            text = (child.text or "").strip()
            if child.tag == "title":
                obj["title"] = text
            elif child.tag == "author":
                obj["authors"].append(
                    {"name": text, "corresponding": _xml_bool(child.get("corresponding"), where)}
                )
            elif child.tag == "affil":
                obj["affiliations"].append(
                    {"institution": child.get("institution", ""), "country": child.get("country", "")}
                )
            elif child.tag == "class":
                obj["macro_keywords"].append({"code": child.get("code", ""), "term": child.get("term", "")})
            elif child.tag == "kw":
                obj["micro_keywords"].append(text)
            else:
                raise RecordError(f"{where}: unexpected element <{child.tag}>")
        if obj["title"] is None:
            raise RecordError(f"{where}: missing field 'title'")
        records.append(_record_from_dict(obj, where))
    return records


def parse_records(
    data: bytes | str | IO,
    format: str = "lines",
    registry: PublicationRegistry | None = None,
) -> list[PaperRecord]:
    """Parse bibliographic entries into records, preserving input order.

    When `registry` is given, every publication id must resolve in it;
    the error lists all unresolved tokens.
    """
    if hasattr(data, "read"):
        data = data.read()
    if isinstance(data, str):
        data = data.encode("utf-8")
    if format == "lines":
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise RecordError(f"input is not UTF-8: {exc}") from None
        records = _parse_lines(text)
    elif format == "xml":
        records = _parse_xml(data)
    else:
        raise ValueError(f"unknown input format {format!r}")
    if registry is not None:
        missing = sorted({r.publication_id for r in records if r.publication_id not in registry})
        if missing:
            raise RegistryError(f"unknown publication_id(s): {', '.join(missing)}")
    return records


def read_records(path: str | Path, format: str | None = None,
                 registry: PublicationRegistry | None = None) -> list[PaperRecord]:
    path = Path(path)
    if format is None:
        format = "xml" if path.suffix.lower() == ".xml" else "lines"
    return parse_records(path.read_bytes(), format, registry)


def serialize_records(records: Sequence[PaperRecord], format: str = "lines") -> str:
    """Inverse of :func:`parse_records`."""
    if format == "lines":
        return "".join(
            json.dumps(r.to_dict(), ensure_ascii=False, sort_keys=False) + "\n" for r in records
        )
    if format != "xml":
        raise ValueError(f"unknown output format {format!r}")
    root = ET.Element("papers")
    for r in records:
        paper = ET.SubElement(root, "paper", year=str(r.year), pub=r.publication_id, kind=r.kind.value)
        ET.SubElement(paper, "title").text = r.title
        for a in r.authors:
            ET.SubElement(paper, "author", corresponding="true" if a.corresponding else "false").text = a.name
        for f in r.affiliations:
            ET.SubElement(paper, "affil", institution=f.institution, country=f.country)
        for code, term in r.macro_keywords:
            ET.SubElement(paper, "class", code=code, term=term)
        for kw in r.micro_keywords:
            ET.SubElement(paper, "kw").text = kw
    ET.indent(root)
    buf = io.StringIO()
    ET.ElementTree(root).write(buf, encoding="unicode", xml_declaration=False)
    return buf.getvalue() + "\n"


def filter_research(records: Iterable[PaperRecord]) -> list[PaperRecord]:
    """Keep research papers only; editorials, short and industry papers go."""
    return [r for r in records if r.kind is PaperKind.RESEARCH]


def build_corpus(
    registry: PublicationRegistry,
    records: Iterable[PaperRecord],
    window: tuple[int, int] | None = None,
) -> Corpus:
    """Filter to research papers inside `window` and bind them to `registry`.

    Without a window, the span of the surviving records' years is used.
    """
    kept = filter_research(records)
    if window is None:
        if not kept:
            raise RecordError("no research records to derive a window from")
        window = (min(r.year for r in kept), max(r.year for r in kept))
    start, end = window
    kept = [r for r in kept if start <= r.year <= end]
    missing = sorted({r.publication_id for r in kept if r.publication_id not in registry})
    if missing:
        raise RegistryError(f"unknown publication_id(s): {', '.join(missing)}")
    return Corpus(registry, tuple(kept), (start, end))
