"""Paths to the bundled synthetic fixtures (regenerate with tools/make_fixtures.py)."""
from __future__ import annotations

from importlib import resources
from pathlib import Path

NAMES = (
    "registry.tsv",
    "aliases.tsv",
    "corpus50.jsonl",
    "corpus50_head.xml",
    "mixed15.jsonl",
    "trends6y.jsonl",
)


def data_path(name: str) -> Path:
    if name not in NAMES:
        raise KeyError(f"no bundled file {name!r}; choose from {', '.join(NAMES)}")
    return Path(str(resources.files("bibliorank") / "data" / name))
