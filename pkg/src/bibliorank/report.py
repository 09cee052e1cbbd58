"""File emitters: TSV tables, a run manifest and stacked-area SVG charts.

Everything written here is a pure function of its inputs, so two runs on
the same data produce byte-identical directories. Layout::

    <out>/manifest.json
    <out>/rankings/   score tables, rankings, composition profiles, noteworthy blocks
    <out>/trends/     keyword-by-year matrices
    <out>/fits/       curve-fit tables
    <out>/charts/     SVG stacked-area charts
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from . import __version__
from .normalize import AliasMap, CanonicalCorpus
from .rankings import CompositionProfile, NoteworthyTable, RankingEntry
from .records import PublicationRegistry
from .scoring import ScoreTable
from .stats import BestFit, FitResult
from .trends import TrendSeries, stack_cumulate

__all__ = [
    "RunManifest",
    "EmitError",
    "make_manifest",
    "format_score",
    "format_real",
    "score_table_tsv",
    "ranking_tsv",
    "trend_tsv",
    "fit_tsv",
    "composition_tsv",
    "noteworthy_text",
    "emit_tables",
    "write_text_file",
    "render_stacked_chart",
    "emit_stacked_chart",
]

MANIFEST_NAME = "manifest.json"

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5",
    "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5",
)


class EmitError(OSError):
    pass


def format_score(value: float | None) -> str:
    return "" if value is None else f"{value:.1f}"


def format_real(value: float) -> str:
    return f"{value:.6g}"


def _tsv(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    lines = ["\t".join(header)]
    for row in rows:
        lines.append("\t".join(str(c) for c in row))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RunManifest:
    corpus_digest: str
    window: tuple[int, int]
    record_count: int
    config_digest: str
    tool_version: str = __version__

    def to_json(self) -> str:
        d = asdict(self)
        d["window"] = list(self.window)
        return json.dumps(d, indent=2, sort_keys=True) + "\n"


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def make_manifest(corpus: CanonicalCorpus, registry: PublicationRegistry | None = None,
                  alias_maps: Sequence[AliasMap] = ()) -> RunManifest:
    body = "".join(
        json.dumps(asdict(r), ensure_ascii=False, sort_keys=True) + "\n" for r in corpus.records
    )
    registry = registry if registry is not None else corpus.registry
    config = registry.to_tsv() + "".join(
        "\t".join(row) + "\n" for m in alias_maps for row in m.rows()
    )
    return RunManifest(_sha256(body), tuple(corpus.window), len(corpus.records), _sha256(config))


def score_table_tsv(table: ScoreTable) -> str:
    rows = ((i, name, format_score(h / 2)) for i, (name, h) in enumerate(table.ranked(), 1))
    return _tsv(("rank", "name", "score"), rows)


def ranking_tsv(entries: Sequence[RankingEntry]) -> str:
    rows = ((e.rank, e.name, format_score(e.comprehensive), format_score(e.leading)) for e in entries)
    return _tsv(("rank", "name", "comprehensive", "leading"), rows)


def trend_tsv(series: TrendSeries) -> str:
    vals = series.scores()
    fmt = format_score if series.mode == "score" else format_real
    rows = ([kw, *(fmt(float(v)) for v in vals[i])] for i, kw in enumerate(series.keywords))
    return _tsv(("keyword", *map(str, series.years)), rows)


def fit_tsv(results: Iterable[FitResult]) -> str:
    rows = (
        (r.family, " ".join(format_real(p) for p in r.params), format_real(r.r_squared), r.formula())
        for r in results
    )
    return _tsv(("family", "params", "r_squared", "formula"), rows)


def composition_tsv(profiles: Sequence[CompositionProfile]) -> str:
    rows = ((p.institution, p.top100, p.top300, p.top1000, p.total_scholars) for p in profiles)
    return _tsv(("institution", "top100", "top300", "top1000", "total_scholars"), rows)


def noteworthy_text(tables: Sequence[NoteworthyTable]) -> str:
    out = []
    for t in tables:
        out.append(f"[area] {t.area}\t{t.n_records} records")
        for e in t.scholars:
            out.append(f"scholar\t{e.rank}\t{e.name}\t{format_score(e.comprehensive)}")
        for e in t.institutions:
            out.append(f"institution\t{e.rank}\t{e.name}\t{format_score(e.comprehensive)}")
        out.append("")
    return "\n".join(out)


def _render(name: str, obj) -> tuple[str, str]:
    """(relative path, content) for one result object."""
    if isinstance(obj, ScoreTable):
        return f"rankings/{name}.tsv", score_table_tsv(obj)
    if isinstance(obj, TrendSeries):
        return f"trends/{name}.tsv", trend_tsv(obj)
    if isinstance(obj, FitResult):
        return f"fits/{name}.tsv", fit_tsv([obj])
    if isinstance(obj, BestFit):
        return f"fits/{name}.tsv", fit_tsv(obj.candidates.values())
    if isinstance(obj, (list, tuple)):
        items = list(obj)
        if all(isinstance(o, RankingEntry) for o in items):
            return f"rankings/{name}.tsv", ranking_tsv(items)
        if items and all(isinstance(o, FitResult) for o in items):
            return f"fits/{name}.tsv", fit_tsv(items)
        if items and all(isinstance(o, CompositionProfile) for o in items):
            return f"rankings/{name}.tsv", composition_tsv(items)
        if items and all(isinstance(o, NoteworthyTable) for o in items):
            return f"rankings/{name}.txt", noteworthy_text(items)
    raise TypeError(f"cannot emit result {name!r} of type {type(obj).__name__}")


def write_text_file(path: Path, content: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(content)
    except OSError as exc:
        raise EmitError(f"cannot write {path}: {exc.strerror or exc}") from None


def emit_tables(results: Mapping[str, object], directory: str | Path,
                manifest: RunManifest | None = None) -> list[Path]:
    """Write each named result under `directory`; returns the written paths.

    The manifest file is always written, even for an empty result set.
    """
    directory = Path(directory)
    written = []
    rendered = [_render(name, obj) for name, obj in sorted(results.items())]
    if manifest is not None:
        manifest_text = manifest.to_json()
    else:
        manifest_text = json.dumps({"tool_version": __version__}, indent=2, sort_keys=True) + "\n"
    path = directory / MANIFEST_NAME
    write_text_file(path, manifest_text)
    written.append(path)
    for rel, content in rendered:
        path = directory / rel
        write_text_file(path, content)
        written.append(path)
    return written


# chart geometry, in pixels
_W, _H = 860, 480
_LEFT, _RIGHT, _TOP, _BOTTOM = 70, 300, 40, 50


def _nice_max(v: float) -> float:
    if v <= 0:
        return 1.0
    mag = 10 ** np.floor(np.log10(v))
    for step in (1, 2, 2.5, 5, 10):
        if step * mag >= v:
            return float(step * mag)
    return float(10 * mag)


def render_stacked_chart(series: TrendSeries, title: str | None = None) -> str:
    """SVG text for a stacked-area chart of `series`.

    Bands are drawn in a group whose transform maps data coordinates to
    pixels, so every polygon point is literally ``year,stacked_value``. The
    first polygon row is the band's upper contour left to right, followed
    by its lower contour right to left. The top-ranked keyword is the
    bottom band; the legend lists bands top-down.
    """
    if not series.keywords or not series.years:
        raise ValueError("cannot chart an empty series")
    stacked = series if series.stacked else stack_cumulate(series)
    vals = stacked.scores()
    years = np.asarray(stacked.years, dtype=float)
    if len(years) == 1:
        xs = np.array([years[0] - 0.5, years[0] + 0.5])
        vals = np.repeat(vals, 2, axis=1)
    else:
        xs = years
    ymax = 100.0 if series.mode == "percent" else _nice_max(float(vals.max()))
    pw, ph = _W - _LEFT - _RIGHT, _H - _TOP - _BOTTOM
    sx = pw / (xs[-1] - xs[0])
    sy = ph / ymax
    tx = _LEFT - xs[0] * sx
    ty = _TOP + ph
    unit = "%" if series.mode == "percent" else "score"
    title = title or f"{series.level}-keyword trends ({series.mode})"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="11">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="#ffffff"/>',
        f'<text x="{_LEFT}" y="{_TOP - 15}" font-size="14">{escape(title)}</text>',
        f'<g id="bands" transform="matrix({format_real(sx)} 0 0 {format_real(-sy)} '
        f'{format_real(tx)} {format_real(ty)})">',
    ]
    for i, kw in enumerate(stacked.keywords):
        upper = vals[i]
        lower = vals[i - 1] if i else np.zeros_like(upper)
        pts = [(x, v) for x, v in zip(xs, upper)] + [(x, v) for x, v in zip(xs[::-1], lower[::-1])]
        points = " ".join(f"{format_real(x)},{format_real(v)}" for x, v in pts)
        out.append(
            f'<polygon class="band" data-rank="{i + 1}" data-keyword={quoteattr(kw)} '
            f'points="{points}" fill="{PALETTE[i % len(PALETTE)]}" stroke="#333333" '
            f'stroke-width="0.5" vector-effect="non-scaling-stroke"/>'
        )
    out.append("</g>")

    # axes
    out.append('<g id="axes" stroke="#000000" stroke-width="1">')
    out.append(f'<line x1="{_LEFT}" y1="{ty}" x2="{_LEFT + pw}" y2="{ty}"/>')
    out.append(f'<line x1="{_LEFT}" y1="{_TOP}" x2="{_LEFT}" y2="{ty}"/>')
    out.append("</g>")
    out.append('<g id="ticks" fill="#000000">')
    for y in stacked.years:
        px = tx + y * sx if len(years) > 1 else _LEFT + pw / 2
        out.append(f'<text x="{format_real(px)}" y="{ty + 18}" text-anchor="middle">{y}</text>')
    for j in range(6):
        v = ymax * j / 5
        py = ty - v * sy
        out.append(f'<text x="{_LEFT - 6}" y="{format_real(py + 4)}" text-anchor="end">{format_real(v)}</text>')
    out.append(
        f'<text x="18" y="{format_real(_TOP + ph / 2)}" text-anchor="middle" '
        f'transform="rotate(-90 18 {format_real(_TOP + ph / 2)})">{unit}</text>'
    )
    out.append("</g>")

    # legend: top entry is the top band
    out.append('<g id="legend">')
    n = len(stacked.keywords)
    row_h = min(20.0, (_H - _TOP - 10) / n)
    lx = _W - _RIGHT + 20
    for slot, i in enumerate(reversed(range(n))):
        y = _TOP + slot * row_h
        out.append(
            f'<rect x="{lx}" y="{format_real(y)}" width="12" height="{format_real(min(12.0, row_h - 2))}" '
            f'fill="{PALETTE[i % len(PALETTE)]}"/>'
        )
        out.append(
            f'<text x="{lx + 18}" y="{format_real(y + 10)}">{i + 1}. {escape(stacked.keywords[i])}</text>'
        )
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_stacked_chart(series: TrendSeries, path: str | Path, title: str | None = None) -> Path:
    path = Path(path)
    write_text_file(path, render_stacked_chart(series, title))
    return path
