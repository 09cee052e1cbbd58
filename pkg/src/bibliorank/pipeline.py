"""Whole-corpus analysis run: every table, trend matrix, fit and chart."""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Sequence

from .normalize import AliasMap, CanonicalCorpus
from .rankings import composition_profiles, noteworthy_by_area, rank_top_k, reference_line
from .report import emit_stacked_chart, emit_tables, make_manifest, write_text_file
from .scoring import Rule, Subject, score_table
from .stats import RankScoreSeries, best_fit
from .trends import stack_cumulate, trend_series

log = logging.getLogger(__name__)

RANKED_SUBJECTS = (Subject.SCHOLAR, Subject.INSTITUTION, Subject.COUNTRY)
FIT_SUBJECTS = tuple(Subject)


def analyze(corpus: CanonicalCorpus, top_k: int = 20, n_areas: int = 10) -> tuple[dict, dict]:
    """Return ``(tables, series)``: emit-ready results keyed by file stem, and
    the stacked trend series keyed by chart stem."""
    results: dict[str, object] = {}
    tables = {}
    for subject in Subject:
        rules = (Rule.COMPREHENSIVE,) if subject.value.endswith("keyword") else tuple(Rule)
        for rule in rules:
            t = score_table(corpus.records, subject, rule)
            tables[subject, rule] = t
            results[f"{subject.value}_{rule.value}"] = t

    ref_rows = []
    for subject in RANKED_SUBJECTS:
        comp, lead = tables[subject, Rule.COMPREHENSIVE], tables[subject, Rule.LEADING]
        results[f"top{top_k}_{subject.value}"] = rank_top_k(comp, top_k, lead)
        if len(lead):
            ref_rows.append(f"{subject.value}\t{top_k}\t{reference_line(lead, top_k):.1f}")
    results["reference_lines.tsv"] = "subject\tk\tleading_score\n" + "".join(r + "\n" for r in ref_rows)

    top_inst = [e.name for e in rank_top_k(tables[Subject.INSTITUTION, Rule.COMPREHENSIVE], top_k)]
    results["composition"] = composition_profiles(
        corpus, tables[Subject.SCHOLAR, Rule.COMPREHENSIVE], top_inst
    )

    areas = [e.name for e in rank_top_k(tables[Subject.MACRO_KEYWORD, Rule.COMPREHENSIVE], n_areas)]
    results["noteworthy"] = [noteworthy_by_area(corpus, a) for a in areas]

    for subject in FIT_SUBJECTS:
        series = RankScoreSeries.from_table(tables[subject, Rule.COMPREHENSIVE])
        if len(series) < 4:
            log.info("skipping fits for %s: only %d positive scores", subject.value, len(series))
            continue
        results[f"fit_{subject.value}"] = best_fit(series)

    charts = {}
    for level in ("macro", "micro"):
        for mode in ("score", "percent"):
            s = trend_series(corpus, level, mode, top_k)
            results[f"{level}_{mode}"] = s
            if s.keywords:
                charts[f"{level}_{mode}"] = stack_cumulate(s)
    return results, charts


def write_report(corpus: CanonicalCorpus, out_dir: str | Path, alias_maps: Sequence[AliasMap] = (),
                 top_k: int = 20, n_areas: int = 10) -> list[Path]:
    out_dir = Path(out_dir)
    results, charts = analyze(corpus, top_k, n_areas)
    raw_text = {k: v for k, v in results.items() if isinstance(v, str)}
    tables = {k: v for k, v in results.items() if not isinstance(v, str)}
    written = emit_tables(tables, out_dir, make_manifest(corpus, alias_maps=alias_maps))
    for rel, text in sorted(raw_text.items()):
        path = out_dir / "rankings" / rel
        write_text_file(path, text)
        written.append(path)
    for stem, series in sorted(charts.items()):
        written.append(emit_stacked_chart(series, out_dir / "charts" / f"{stem}.svg"))
    return written
