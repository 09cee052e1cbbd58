"""Slow, obviously-correct reimplementations used as test oracles.

They read raw PaperRecords and do their own alias lookup, de-duplication
and Fraction arithmetic, sharing no code with the package's scoring path.
"""
from __future__ import annotations

import math
import random
from collections import defaultdict
from fractions import Fraction

TIER = {("journal", "A"): 10, ("journal", "B"): 5, ("journal", "C"): 2,
        ("conference", "A"): 6, ("conference", "B"): 3}


def key(s: str) -> str:
    return " ".join(s.split()).casefold()


def lookup(table: dict[str, str], raw: str) -> str:
    """Alias table keyed by raw-key -> canonical, plus canonical self lookups."""
    k = key(raw)
    if k in table:
        return table[k]
    for canonical in table.values():
        if key(canonical) == k:
            return canonical
    return k


def first_occurrences(xs):
    out = []
    for x in xs:
        if x not in out:
            out.append(x)
    return out


def oracle_tables(records, scores_by_pub: dict[str, int], aliases: dict[str, dict[str, str]] | None = None):
    """Every subject/rule table, as {name: Fraction}, by plain enumeration.

    Passthrough policy only. `aliases` maps kind -> {raw_key: canonical}.
    """
    aliases = aliases or {}
    sch = {r: defaultdict(Fraction) for r in ("comprehensive", "leading")}
    inst = {r: defaultdict(Fraction) for r in ("comprehensive", "leading")}
    ctry = {r: defaultdict(Fraction) for r in ("comprehensive", "leading")}
    macro = defaultdict(Fraction)
    micro = defaultdict(Fraction)
    for rec in records:
        s = Fraction(scores_by_pub[rec.publication_id])
        names = [lookup(aliases.get("scholar", {}), a.name) for a in rec.authors]
        corr = [a.corresponding for a in rec.authors]
        for rule, half in (("comprehensive", s / 2), ("leading", Fraction(0))):
            if len(names) == 1:
                sch[rule][names[0]] += s
            else:
                for i, n in enumerate(names):
                    if i == 0 or corr[i]:
                        sch[rule][n] += s
                    else:
                        sch[rule][n] += half
        insts = first_occurrences(lookup(aliases.get("institution", {}), f.institution) for f in rec.affiliations)
        ctrs = first_occurrences(lookup(aliases.get("country", {}), f.country) for f in rec.affiliations)
        for group, table in ((insts, inst), (ctrs, ctry)):
            for rule, half in (("comprehensive", s / 2), ("leading", Fraction(0))):
                for i, n in enumerate(group):
                    table[rule][n] += s if (i == 0 or len(group) == 1) else half
        kw = aliases.get("keyword", {})
        for code, term in first_occurrences((c, lookup(kw, t)) for c, t in rec.macro_keywords):
            macro[f"{code} {term}" if code else term] += s
        for term in first_occurrences(lookup(kw, t) for t in rec.micro_keywords):
            micro[term] += s
    out = {}
    for rule in ("comprehensive", "leading"):
        out["scholar", rule] = dict(sch[rule])
        out["institution", rule] = dict(inst[rule])
        out["country", rule] = dict(ctry[rule])
    out["macro_keyword", "comprehensive"] = dict(macro)
    out["micro_keyword", "comprehensive"] = dict(micro)
    return out


def as_fractions(table) -> dict:
    return {k: Fraction(h, 2) for k, h in table.halves.items()}


def loss_product(s_all: int, s_decrease: int, s_a: int) -> Fraction:
    """Loss-all-of-a probability as the telescoped product of s_a ratios."""
    p = Fraction(1)
    for i in range(s_a):
        p *= Fraction(s_decrease - i, s_all - i)
    return p


def loss_factorials(s_all: int, s_decrease: int, s_a: int) -> Fraction:
    """(S_all - S_a)! / S_all! * (S_dec)! / (S_dec - S_a)! in factorials."""
    if s_a > s_decrease:
        return Fraction(0)
    f = math.factorial
    return Fraction(f(s_all - s_a), f(s_all)) * Fraction(f(s_decrease), f(s_decrease - s_a))


def sampled_loss_frequency(s_all: int, s_decrease: int, s_a: int, lost: int,
                           trials: int, seed: int) -> float:
    """Fraction of uniform s_decrease-subsets that contain exactly `lost` of a's units."""
    rng = random.Random(seed)
    units = range(s_all)
    hits = 0
    for _ in range(trials):
        picked = rng.sample(units, s_decrease)
        if sum(u < s_a for u in picked) == lost:
            hits += 1
    return hits / trials


def least_squares_line(u, v) -> tuple[float, float]:
    """Closed-form simple regression v = slope*u + intercept."""
    n = len(u)
    mu, mv = sum(u) / n, sum(v) / n
    sxx = sum((x - mu) ** 2 for x in u)
    sxy = sum((x - mu) * (y - mv) for x, y in zip(u, v))
    slope = sxy / sxx
    return slope, mv - slope * mu
