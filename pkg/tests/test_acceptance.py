"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line.

The lines are printed at the end of the pytest run (see conftest.py). The
module can also be executed directly: ``python tests/test_acceptance.py``.
"""
import hashlib
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from bibliorank.datasets import data_path
from bibliorank.normalize import CanonicalCorpus, canonicalize, load_alias_maps
from bibliorank.rankings import area_matches, noteworthy_by_area, rank_top_k
from bibliorank.records import (
    Publication,
    RegistryError,
    basic_score,
    build_corpus,
    load_registry,
    read_records,
)
from bibliorank.scoring import Rule, Subject, record_contributions, score_table
from bibliorank.stats import (
    ErrorModel,
    RankScoreSeries,
    best_fit,
    error_probability_bound,
    error_probability_fraction,
    fit_family,
    monte_carlo_error_probability,
)
from bibliorank.trends import stack_cumulate, trend_series

from conftest import canon, make_paper
from oracles import as_fractions, loss_product, oracle_tables

REPORT: dict[int, str] = {}


@contextmanager
def criterion(n: int, label: str):
    REPORT[n] = f"[FAIL] criterion {n}: {label}"
    start = time.perf_counter()
    yield
    REPORT[n] = f"[PASS] criterion {n}: {label} ({time.perf_counter() - start:.2f} s)"


SUBJECT_RULES = [(s, r) for s in Subject for r in Rule
                 if not (s.value.endswith("keyword") and r is Rule.LEADING)]


def scholar_mass(rec) -> int:
    s2, n = 2 * rec.basic_score, len(rec.authors)
    if n == 1:
        return s2
    leaders = len({0} | {i for i, a in enumerate(rec.authors) if a.corresponding})
    return leaders * s2 + (n - leaders) * s2 // 2


def leading_mass(rec) -> int:
    leaders = len({0} | {i for i, a in enumerate(rec.authors) if a.corresponding})
    return 2 * rec.basic_score * leaders


def test_criterion_1_counting_exactness():
    with criterion(1, "scheme exactness on the 50-record corpus, oracle bit-for-bit, < 1 s"):
        start = time.perf_counter()
        registry = load_registry(data_path("registry.tsv"))
        maps = load_alias_maps(data_path("aliases.tsv"))
        raw = read_records(data_path("corpus50.jsonl"), registry=registry)
        corpus = canonicalize(build_corpus(registry, raw), maps)
        tables = {(s, r): score_table(corpus.records, s, r) for s, r in SUBJECT_RULES}
        elapsed = time.perf_counter() - start

        assert len(corpus.records) == 50
        tiers = {(registry[r.publication_id].kind.value, registry[r.publication_id].pub_class.value)
                 for r in raw}
        assert len(tiers) == 5
        for rec in corpus.records:
            assert sum(h for _, h in record_contributions(rec, Subject.SCHOLAR)) == scholar_mass(rec)
            lead = sum(h for _, h in record_contributions(rec, Subject.SCHOLAR, Rule.LEADING))
            assert lead == leading_mass(rec)

        aliases = {m.kind.value: m.entries for m in maps}
        want = oracle_tables(raw, {p.id: p.basic_score for p in registry}, aliases)
        for (s, r), t in tables.items():
            assert as_fractions(t) == want[s.value, r.value], (s, r)
        assert elapsed < 1.0, f"took {elapsed:.2f} s"


def test_criterion_2_table_constants():
    with criterion(2, "basic score constants and (conference, C) rejection"):
        got = {(k, c): basic_score(Publication("P", "p", k, c))
               for k, c in [("journal", "A"), ("journal", "B"), ("journal", "C"),
                            ("conference", "A"), ("conference", "B")]}
        assert got == {("journal", "A"): 10, ("journal", "B"): 5, ("journal", "C"): 2,
                       ("conference", "A"): 6, ("conference", "B"): 3}
        with pytest.raises(RegistryError):
            Publication("P", "p", "conference", "C")


def _random_corpus(rnd: random.Random, registry):
    pubs = ["TSE", "IST", "SQJ", "ICSE", "ICSM", "JSS"]
    recs = []
    for _ in range(rnd.randint(1, 12)):
        n = rnd.randint(1, 6)
        recs.append(make_paper(
            rnd.choice(pubs),
            [rnd.choice("ABCDEFGHIJ") for _ in range(n)],
            [(rnd.choice(["I1", "I2", "I3", "I4", "I5"]), rnd.choice(["USA", "UK", "China", "Norway"]))
             for _ in range(rnd.randint(1, 4))],
            year=rnd.randint(2008, 2013),
            corresponding={i for i in range(n) if rnd.random() < 0.25},
        ))
    return canon(registry, recs)


def test_criterion_3_leading_bounded_and_order_free(small_registry):
    with criterion(3, "leading <= comprehensive and permutation determinism, 1000 corpora, < 30 s"):
        start = time.perf_counter()
        for seed in range(1000):
            rnd = random.Random(seed)
            c = _random_corpus(rnd, small_registry)
            shuffled = list(c.records)
            rnd.shuffle(shuffled)
            for subject in (Subject.SCHOLAR, Subject.INSTITUTION, Subject.COUNTRY):
                comp = score_table(c.records, subject, Rule.COMPREHENSIVE)
                lead = score_table(c.records, subject, Rule.LEADING)
                assert all(lead.halves.get(k, 0) <= v for k, v in comp.halves.items()), seed
                assert set(lead) <= set(comp), seed
                assert score_table(shuffled, subject, Rule.COMPREHENSIVE) == comp, seed
                assert score_table(shuffled, subject, Rule.LEADING) == lead, seed
        elapsed = time.perf_counter() - start
        assert elapsed < 30.0, f"took {elapsed:.1f} s"


def test_criterion_4_curve_recovery():
    with criterion(4, "published power and exponential curves refit within tolerance"):
        x = np.arange(1, 51, dtype=float)
        for family, (a0, b0) in (("power", (702.1, -0.58)), ("exponential", (22.90, -0.05))):
            y = a0 * x**b0 if family == "power" else a0 * np.exp(b0 * x)
            s = RankScoreSeries(x, y)
            r = fit_family(s, family)
            a, b = r.params
            assert abs(a - a0) / a0 <= 0.01, (family, a)
            assert abs(b - b0) <= 0.01, (family, b)
            assert r.r_squared >= 0.999
            assert best_fit(s).family == family


def test_criterion_5_error_bound():
    with criterion(5, "exact <= alpha^s_a over the grid, strict for s_a >= 2; (100, 0.2, 5) vs product and MC"):
        for s_all in (50, 100, 1000):
            for alpha in (0.05, 0.1, 0.2):
                a = Fraction(repr(alpha))
                for s_a in range(1, 21):
                    m = ErrorModel(s_all, s_a, 0, alpha)
                    exact = error_probability_fraction(m)
                    assert exact <= a**s_a
                    assert float(exact) <= error_probability_bound(m)
                    if s_a >= 2:
                        assert exact < a**s_a, (s_all, alpha, s_a)

        m = ErrorModel(100, 5, 0, 0.2)
        exact = error_probability_fraction(m)
        product = Fraction(20, 100) * Fraction(19, 99) * Fraction(18, 98) * Fraction(17, 97) * Fraction(16, 96)
        assert exact == product == loss_product(100, 20, 5)
        est, se = monte_carlo_error_probability(m, 100_000, np.random.default_rng(2014))
        assert se > 0 and abs(est - float(exact)) <= 4 * se, (est, se, float(exact))


def test_criterion_6_trend_consistency(trends6y):
    with criterion(6, "percent columns sum to 100, stacked top contour, order-invariant scores"):
        pct = trend_series(trends6y, "macro", "percent", top_k=None)
        assert len(pct.years) == 6
        sums = pct.values.sum(axis=0)
        assert np.all(np.abs(sums - 100.0) <= 1e-9), sums
        for mode in ("score", "percent"):
            full = trend_series(trends6y, "macro", mode, top_k=None)
            np.testing.assert_allclose(stack_cumulate(full).values[-1], full.values.sum(axis=0), rtol=0, atol=1e-9)
        base = trend_series(trends6y, "macro", "score", top_k=None)
        rnd = random.Random(6)
        for _ in range(5):
            recs = list(trends6y.records)
            rnd.shuffle(recs)
            shuffled = CanonicalCorpus(trends6y.registry, tuple(recs), trends6y.window)
            assert trend_series(shuffled, "macro", "score", top_k=None) == base


def test_criterion_7_noteworthy_commutes(registry, raw50, alias_maps, corpus50):
    with criterion(7, "noteworthy equals filter-then-score oracle on every area"):
        scores = {p.id: p.basic_score for p in registry}
        aliases = {m.kind.value: m.entries for m in alias_maps}
        areas = sorted({k for r in corpus50.records for k in r.macro_keys})
        assert areas
        for area in areas:
            keep = area_matches(area)
            idx = [i for i, r in enumerate(corpus50.records) if keep(r)]
            want = oracle_tables([raw50[i] for i in idx], scores, aliases)
            nt = noteworthy_by_area(corpus50, area, 10**6, 10**6)
            assert nt.n_records == len(idx)
            for entries, subject in ((nt.scholars, "scholar"), (nt.institutions, "institution")):
                assert {e.name: Fraction(e.comprehensive) for e in entries} == want[subject, "comprehensive"]
                expect = sorted(want[subject, "comprehensive"].items(), key=lambda kv: (-kv[1], kv[0]))
                assert [e.name for e in entries] == [k for k, _ in expect]
            top = noteworthy_by_area(corpus50, area)
            sub = corpus50.restrict(keep)
            assert top.scholars == tuple(rank_top_k(score_table(sub.records, Subject.SCHOLAR), 5,
                                                   score_table(sub.records, Subject.SCHOLAR, Rule.LEADING)))


def _digest(root):
    h = hashlib.sha256()
    files = sorted(p for p in root.rglob("*") if p.is_file())
    for p in files:
        h.update(str(p.relative_to(root)).encode() + b"\0" + p.read_bytes() + b"\0")
    return h.hexdigest(), len(files)


def test_criterion_8_end_to_end_determinism(tmp_path):
    with criterion(8, "CLI report twice gives byte-identical directories"):
        digests = []
        for name in ("run1", "run2"):
            out = tmp_path / name
            proc = subprocess.run(
                [sys.executable, "-m", "bibliorank.cli", "--registry", str(data_path("registry.tsv")),
                 "--aliases", str(data_path("aliases.tsv")), "--out", str(out),
                 "report", str(data_path("corpus50.jsonl"))],
                capture_output=True, text=True,
            )
            assert proc.returncode == 0, proc.stderr
            digests.append(_digest(out))
        assert digests[0] == digests[1]
        assert digests[0][1] > 10


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
