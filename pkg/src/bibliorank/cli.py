"""Command-line entry point.

Usage::

    bibliorank --registry REG.tsv [--aliases MAP.tsv] [--window 2008:2013] [--out DIR] <command> ...

Commands: ingest, score, rank, trends, fit, errorbound, noteworthy, report.
Global options may appear before or after the command name. Any failure
exits with status 1 and a single ``bibliorank: error: ...`` line on stderr.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .normalize import Policy, canonicalize, load_alias_maps
from .pipeline import write_report
from .rankings import noteworthy_by_area, rank_top_k, reference_line
from .records import build_corpus, load_registry, read_records, serialize_records
from .report import (
    emit_stacked_chart,
    fit_tsv,
    make_manifest,
    noteworthy_text,
    ranking_tsv,
    score_table_tsv,
    trend_tsv,
    write_text_file,
)
from .scoring import Rule, Subject, score_table
from .stats import (
    ErrorModel,
    RankScoreSeries,
    best_fit,
    error_probability_bound,
    error_probability_exact,
    monte_carlo_error_probability,
)
from .trends import stack_cumulate, trend_series


class CLIError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(2, f"{self.prog}: error: {message}\n")


def _window(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(":")
        start, end = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like Y1:Y2, got {text!r}") from None
    if start > end:
        raise argparse.ArgumentTypeError(f"window start {start} is after end {end}")
    return start, end


def _global_options(default) -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--registry", metavar="FILE", default=default, help="publication registry (TSV)")
    g.add_argument("--aliases", metavar="FILE", action="append", default=default,
                   help="alias map (TSV); may be repeated")
    g.add_argument("--window", metavar="Y1:Y2", type=_window, default=default,
                   help="analysis window, inclusive")
    g.add_argument("--out", metavar="DIR", default=default, help="output directory")
    g.add_argument("--policy", choices=[p.value for p in Policy], default=default,
                   help="unmatched institutions: drop (strict) or keep (passthrough)")
    g.add_argument("--format", choices=["lines", "xml"], default=default,
                   help="input format (default: by file extension)")
    g.add_argument("-v", "--verbose", action="store_true", default=default)
    return p


def build_parser() -> argparse.ArgumentParser:
    # sub-command copies use SUPPRESS so they do not clobber values given earlier
    common = _global_options(argparse.SUPPRESS)
    parser = _Parser(prog="bibliorank", parents=[_global_options(argparse.SUPPRESS)],
                     description="Publication-tier bibliometric scoring and trends.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    subjects = [s.value for s in Subject]

    p = sub.add_parser("ingest", parents=[common], help="parse, filter and canonicalize records")
    p.add_argument("input")

    p = sub.add_parser("score", parents=[common], help="print one score table")
    p.add_argument("input")
    p.add_argument("--subject", choices=subjects, default="scholar")
    p.add_argument("--rule", choices=[r.value for r in Rule], default="comprehensive")

    p = sub.add_parser("rank", parents=[common], help="top-k with both rules and the reference line")
    p.add_argument("input")
    p.add_argument("--subject", choices=["scholar", "institution", "country"], default="scholar")
    p.add_argument("-k", "--top-k", type=int, default=20)
    p.add_argument("--reference-k", type=int, default=20)

    p = sub.add_parser("trends", parents=[common], help="keyword-by-year trend matrix")
    p.add_argument("input")
    p.add_argument("--level", choices=["macro", "micro"], default="macro")
    p.add_argument("--mode", choices=["score", "percent"], default="score")
    p.add_argument("--top-k", type=int, default=20)
    p.add_argument("--stacked", action="store_true", help="print stacked (cumulated) rows")

    p = sub.add_parser("fit", parents=[common], help="fit the four curve families to rank-score data")
    p.add_argument("input", nargs="?", help="record file (omit with --series)")
    p.add_argument("--subject", choices=subjects, default="scholar")
    p.add_argument("--series", metavar="FILE", help="TSV of rank<TAB>score rows instead of a corpus")

    p = sub.add_parser("errorbound", parents=[common], help="exact error-impact probability and bound")
    p.add_argument("--s-all", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--s-a", type=float, required=True)
    p.add_argument("--s-b", type=float, default=0.0)
    p.add_argument("--tail", action="store_true", help="probability of losing at least s_a - s_b units")
    p.add_argument("--trials", type=int, default=0, help="also run a Monte Carlo check")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("noteworthy", parents=[common], help="per-area top scholars and institutions")
    p.add_argument("input")
    p.add_argument("--area", action="append", help="macro keyword (repeatable); default: top areas")
    p.add_argument("--n-areas", type=int, default=10)
    p.add_argument("--scholars", type=int, default=5)
    p.add_argument("--institutions", type=int, default=3)

    p = sub.add_parser("report", parents=[common], help="full analysis into --out")
    p.add_argument("input")
    p.add_argument("--top-k", type=int, default=20)
    p.add_argument("--n-areas", type=int, default=10)
    return parser


def _load(args):
    if not getattr(args, "registry", None):
        raise CLIError("--registry is required for this command")
    registry = load_registry(args.registry)
    maps = []
    for path in getattr(args, "aliases", None) or []:
        maps.extend(load_alias_maps(path))
    records = read_records(args.input, getattr(args, "format", None), registry)
    corpus = build_corpus(registry, records, getattr(args, "window", None))
    policy = getattr(args, "policy", None) or Policy.PASSTHROUGH
    return records, corpus, canonicalize(corpus, maps, policy), maps


def _emit(args, text: str, rel: str | None = None) -> None:
    sys.stdout.write(text)
    out = getattr(args, "out", None)
    if out and rel:
        write_text_file(Path(out) / rel, text)


def cmd_ingest(args) -> None:
    records, corpus, canon, maps = _load(args)
    print(f"records\t{len(records)}")
    print(f"kept\t{len(corpus.records)}")
    print(f"window\t{corpus.window[0]}:{corpus.window[1]}")
    print(f"dropped_strings\t{len(canon.dropped)}")
    out = getattr(args, "out", None)
    if out:
        out = Path(out)
        write_text_file(out / "corpus.jsonl", serialize_records(corpus.records))
        write_text_file(out / "dropped.tsv", "record\tfield\traw\n" + "".join(
            f"{d.record}\t{d.field}\t{d.raw}\n" for d in canon.dropped))
        write_text_file(out / "manifest.json", make_manifest(canon, alias_maps=maps).to_json())


def cmd_score(args) -> None:
    _, _, canon, _ = _load(args)
    table = score_table(canon.records, args.subject, args.rule)
    _emit(args, score_table_tsv(table), f"rankings/{table.subject.value}_{table.rule.value}.tsv")


def cmd_rank(args) -> None:
    _, _, canon, _ = _load(args)
    comp = score_table(canon.records, args.subject, Rule.COMPREHENSIVE)
    lead = score_table(canon.records, args.subject, Rule.LEADING)
    entries = rank_top_k(comp, args.top_k, lead)
    _emit(args, ranking_tsv(entries), f"rankings/top{args.top_k}_{args.subject}.tsv")
    if len(lead):
        print(f"# reference line (k={args.reference_k}): {reference_line(lead, args.reference_k):.1f}")


def cmd_trends(args) -> None:
    _, _, canon, _ = _load(args)
    series = trend_series(canon, args.level, args.mode, args.top_k)
    stacked = stack_cumulate(series) if series.keywords else series
    stem = f"{args.level}_{args.mode}"
    _emit(args, trend_tsv(stacked if args.stacked else series), f"trends/{stem}.tsv")
    out = getattr(args, "out", None)
    if out and series.keywords:
        emit_stacked_chart(stacked, Path(out) / "charts" / f"{stem}.svg")


def _read_series(path: str) -> RankScoreSeries:
    xs, ys = [], []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        cells = line.split("\t")
        try:
            xs.append(float(cells[0]))
            ys.append(float(cells[1]))
        except (IndexError, ValueError):
            if lineno == 1:
                continue  # header
            raise CLIError(f"{path} line {lineno}: expected rank<TAB>score") from None
    return RankScoreSeries(np.array(xs), np.array(ys))


def cmd_fit(args) -> None:
    if args.series:
        series = _read_series(args.series)
        stem = Path(args.series).stem
    else:
        if not args.input:
            raise CLIError("fit needs a record file or --series")
        _, _, canon, _ = _load(args)
        series = RankScoreSeries.from_table(score_table(canon.records, args.subject))
        stem = args.subject
    best = best_fit(series)
    _emit(args, fit_tsv(best.candidates.values()), f"fits/fit_{stem}.tsv")
    print(f"# best: {best.family}")


def cmd_errorbound(args) -> None:
    model = ErrorModel.from_scores(args.s_all, args.s_a, args.s_b, args.alpha)
    exact = error_probability_exact(model, tail=args.tail)
    print(f"s_all\t{model.s_all}")
    print(f"s_a\t{model.s_a}")
    print(f"s_b\t{model.s_b}")
    print(f"s_decrease\t{model.s_decrease}")
    print(f"exact\t{exact:.6g}")
    if model.s_b == 0:
        bound = error_probability_bound(model)
        print(f"bound\t{bound:.6g}")
        print(f"ratio\t{exact / bound:.6g}")
    else:
        print("bound\tn/a (s_b > 0)")
    if args.trials:
        est, se = monte_carlo_error_probability(model, args.trials, np.random.default_rng(args.seed),
                                                tail=args.tail)
        print(f"monte_carlo\t{est:.6g}\t+/- {se:.2g}")


def cmd_noteworthy(args) -> None:
    _, _, canon, _ = _load(args)
    areas = args.area
    if not areas:
        macro = score_table(canon.records, Subject.MACRO_KEYWORD)
        areas = [e.name for e in rank_top_k(macro, args.n_areas)]
    tables = [noteworthy_by_area(canon, a, args.scholars, args.institutions) for a in areas]
    _emit(args, noteworthy_text(tables), "rankings/noteworthy.txt")


def cmd_report(args) -> None:
    out = getattr(args, "out", None)
    if not out:
        raise CLIError("report needs --out DIR")
    _, _, canon, maps = _load(args)
    written = write_report(canon, out, maps, args.top_k, args.n_areas)
    print(f"wrote {len(written)} files to {out}")


COMMANDS = {
    "ingest": cmd_ingest,
    "score": cmd_score,
    "rank": cmd_rank,
    "trends": cmd_trends,
    "fit": cmd_fit,
    "errorbound": cmd_errorbound,
    "noteworthy": cmd_noteworthy,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        COMMANDS[args.command](args)
    except (CLIError, ValueError, TypeError, OSError, KeyError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"bibliorank: error: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
