import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bibliorank.datasets import data_path
from bibliorank.normalize import canonicalize, load_alias_maps
from bibliorank.records import (
    Affiliation,
    Authorship,
    PaperRecord,
    Publication,
    PublicationRegistry,
    build_corpus,
    load_registry,
    read_records,
)


@pytest.fixture(scope="session")
def registry():
    return load_registry(data_path("registry.tsv"))


@pytest.fixture(scope="session")
def alias_maps():
    return load_alias_maps(data_path("aliases.tsv"))


@pytest.fixture(scope="session")
def raw50(registry):
    return read_records(data_path("corpus50.jsonl"), registry=registry)


@pytest.fixture(scope="session")
def corpus50(registry, raw50, alias_maps):
    return canonicalize(build_corpus(registry, raw50), alias_maps)


@pytest.fixture(scope="session")
def raw_trends(registry):
    return read_records(data_path("trends6y.jsonl"), registry=registry)


@pytest.fixture(scope="session")
def trends6y(registry, raw_trends):
    return canonicalize(build_corpus(registry, raw_trends))


@pytest.fixture(scope="session")
def small_registry():
    return PublicationRegistry([
        Publication("TSE", "IEEE Transactions on Software Engineering", "journal", "A"),
        Publication("IST", "Information and Software Technology", "journal", "B"),
        Publication("JSS", "Journal of Systems and Software", "journal", "B"),
        Publication("SQJ", "Software Quality Journal", "journal", "C"),
        Publication("ICSE", "International Conference on Software Engineering", "conference", "A"),
        Publication("ICSM", "International Conference on Software Maintenance", "conference", "B"),
    ])


def make_paper(pub, authors, affils=(("I1", "USA"),), year=2010, macro=(), micro=(),
               corresponding=(), kind="research", title="t"):
    """Compact record builder: `corresponding` holds author positions."""
    return PaperRecord(
        title=title,
        publication_id=pub,
        year=year,
        authors=tuple(Authorship(a, i in corresponding) for i, a in enumerate(authors)),
        affiliations=tuple(Affiliation(i, c) for i, c in affils),
        macro_keywords=tuple(macro),
        micro_keywords=tuple(micro),
        kind=kind,
    )


def canon(registry, records, window=None, maps=(), policy="passthrough"):
    return canonicalize(build_corpus(registry, records, window), maps, policy)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines.values()):
            terminalreporter.write_line(line)
