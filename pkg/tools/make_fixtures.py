#!/usr/bin/env python3
"""Regenerate the bundled fixture files under src/bibliorank/data/.

    python tools/make_fixtures.py

Output is fully determined by the seeds below. Known counts are asserted
here so a bad edit fails loudly instead of silently shifting the tests.
"""
from __future__ import annotations

import json
import random
from collections import Counter
from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "bibliorank" / "data"

# (id, name, kind, class)
REGISTRY = [
    ("TOPLAS", "ACM Transactions on Programming Languages and Systems", "journal", "A"),
    ("TOSEM", "ACM Transactions on Software Engineering and Methodology", "journal", "A"),
    ("TSE", "IEEE Transactions on Software Engineering", "journal", "A"),
    ("AUSE", "Automated Software Engineering", "journal", "B"),
    ("ESE", "Empirical Software Engineering", "journal", "B"),
    ("TSC", "IEEE Transactions on Services Computing", "journal", "B"),
    ("IETS", "IET Software", "journal", "B"),
    ("IST", "Information and Software Technology", "journal", "B"),
    ("JFP", "Journal of Functional Programming", "journal", "B"),
    ("JSEP", "Journal of Software: Evolution and Process", "journal", "B"),
    ("JSS", "Journal of Systems and Software", "journal", "B"),
    ("REJ", "Requirements Engineering", "journal", "B"),
    ("SCP", "Science of Computer Programming", "journal", "B"),
    ("SOSYM", "Software and System Modeling", "journal", "B"),
    ("SPE", "Software: Practice and Experience", "journal", "B"),
    ("STVR", "Software Testing, Verification and Reliability", "journal", "B"),
    ("CLSS", "Computer Languages, Systems and Structures", "journal", "C"),
    ("IJSEKE", "International Journal of Software Engineering and Knowledge Engineering", "journal", "C"),
    ("STTT", "International Journal on Software Tools for Technology Transfer", "journal", "C"),
    ("JLAP", "Journal of Logic and Algebraic Programming", "journal", "C"),
    ("JWE", "Journal of Web Engineering", "journal", "C"),
    ("SOCA", "Service Oriented Computing and Applications", "journal", "C"),
    ("SQJ", "Software Quality Journal", "journal", "C"),
    ("TPLP", "Theory and Practice of Logic Programming", "journal", "C"),
    ("FSE", "ACM SIGSOFT Symposium on the Foundations of Software Engineering", "conference", "A"),
    ("OOPSLA", "Object-Oriented Programming, Systems, Languages, and Applications", "conference", "A"),
    ("ICSE", "International Conference on Software Engineering", "conference", "A"),
    ("OSDI", "USENIX Symposium on Operating Systems Design and Implementation", "conference", "A"),
    ("PLDI", "ACM SIGPLAN Conference on Programming Language Design and Implementation", "conference", "A"),
    ("POPL", "ACM SIGPLAN-SIGACT Symposium on Principles of Programming Languages", "conference", "A"),
    ("SOSP", "ACM Symposium on Operating Systems Principles", "conference", "A"),
    ("ECOOP", "European Conference on Object-Oriented Programming", "conference", "B"),
    ("RE", "IEEE International Requirements Engineering Conference", "conference", "B"),
    ("ASE", "International Conference on Automated Software Engineering", "conference", "B"),
    ("ICSM", "International Conference on Software Maintenance", "conference", "B"),
    ("ISSTA", "International Symposium on Software Testing and Analysis", "conference", "B"),
]
SCORES = {("journal", "A"): 10, ("journal", "B"): 5, ("journal", "C"): 2,
          ("conference", "A"): 6, ("conference", "B"): 3}
PUB_SCORE = {pid: SCORES[(k, c)] for pid, _, k, c in REGISTRY}
BY_SCORE: dict[int, list[str]] = {}
for pid, s in PUB_SCORE.items():
    BY_SCORE.setdefault(s, []).append(pid)

SCHOLARS = [
    "Alvarez, Maria", "Brandt, Jonas", "Chen, Wei", "Dubois, Claire", "Eriksen, Lars",
    "Fischer, Anna", "Garcia, Pablo", "Haddad, Omar", "Ito, Kenji", "Jensen, Mette",
    "Kowalski, Piotr", "Li, Na", "Moreau, Louis", "Nakamura, Yui", "Okafor, Chidi",
    "Petrov, Ivan", "Quinn, Aoife", "Rossi, Marco", "Silva, Joana", "Tanaka, Hiro",
    "Ueda, Sora", "Varga, Eszter", "Wang, Lei", "Xu, Ming", "Yilmaz, Deniz",
]
# canonical institution -> (country, raw spellings seen in records)
INSTITUTIONS = {
    "University of California": ("USA", ["University of California", "Univ. of California", "UC System"]),
    "Microsoft Research": ("USA", ["Microsoft Research"]),
    "IBM Research": ("USA", ["IBM Research"]),
    "University College London": ("UK", ["University College London"]),
    "Peking University": ("China", ["Peking University"]),
    "University of Oslo": ("Norway", ["University of Oslo"]),
    "Simula Research Laboratory": ("Norway", ["Simula Research Laboratory"]),
    "University of Toronto": ("Canada", ["University of Toronto"]),
    "City University of Hong Kong": ("Hong Kong", ["City University of Hong Kong"]),
    "TU Munich": ("Germany", ["TU Munich"]),
    "University of Sao Paulo": ("Brazil", ["University of Sao Paulo"]),
    "Saarland University": ("Germany", ["Saarland University"]),
}
MACRO = [
    ("723.1", "Computer programming"),
    ("723.2", "Data processing and image processing"),
    ("723.5", "Computer applications"),
    ("721.1", "Computer theory, includes formal logic, automata theory, switching theory, programming theory"),
    ("912.2", "Management"),
    ("913.3", "Quality assurance and control"),
    ("921.5", "Optimization techniques"),
    ("901.3", "Engineering research"),
]
MICRO = [
    "software engineering", "model checking", "software testing", "program analysis",
    "empirical studies", "web services", "formal verification", "refactoring",
    "requirements engineering", "software design", "semantics", "algorithms",
]


def registry_tsv() -> str:
    lines = ["# id\tname\tkind\tclass", "id\tname\tkind\tclass"]
    lines += ["\t".join(row) for row in REGISTRY]
    return "\n".join(lines) + "\n"


def aliases_tsv() -> str:
    return (
        "# kind\traw\tcanonical\n"
        "institution\tUniv. of California\tUniversity of California\n"
        "institution\tUC System\tUniversity of California\n"
        "institution\tUniversity of California\tUniversity of California\n"
        "institution\tMicrosoft Research\tMicrosoft Research\n"
        "institution\tIBM Research\tIBM Research\n"
        "institution\tUniversity College London\tUniversity College London\n"
        "institution\tPeking University\tPeking University\n"
        "institution\tUniversity of Oslo\tUniversity of Oslo\n"
        "institution\tSimula Research Laboratory\tSimula Research Laboratory\n"
        "institution\tUniversity of Toronto\tUniversity of Toronto\n"
        "institution\tCity University of Hong Kong\tCity University of Hong Kong\n"
        "institution\tTU Munich\tTU Munich\n"
        "institution\tTechnische Universitat Munchen\tTU Munich\n"
        "institution\tUniversity of Sao Paulo\tUniversity of Sao Paulo\n"
        "institution\tSaarland University\tSaarland University\n"
        "country\tUnited States\tUSA\n"
        "country\tUnited Kingdom\tUK\n"
        "keyword\tsoftware verification\tformal verification\n"
    )


def make_record(rng: random.Random, pub: str, year: int, n_authors: int, n_inst: int,
                corresponding: str, title: str, kind: str = "research",
                n_macro: int = 1, n_micro: int = 2, dup_country: bool = False) -> dict:
    authors = rng.sample(SCHOLARS, n_authors)
    flags = [False] * n_authors
    if corresponding == "first":
        flags[0] = True
    elif corresponding == "other" and n_authors > 1:
        flags[rng.randrange(1, n_authors)] = True
    canon = rng.sample(sorted(INSTITUTIONS), n_inst)
    affils = []
    for c in canon:
        country, spellings = INSTITUTIONS[c]
        affils.append({"institution": rng.choice(spellings), "country": country})
    if dup_country and n_inst >= 2:
        affils[1]["country"] = affils[0]["country"]
    macro = [{"code": c, "term": t} for c, t in rng.sample(MACRO, n_macro)]
    micro = rng.sample(MICRO, n_micro)
    return {
        "title": title,
        "publication_id": pub,
        "year": year,
        "authors": [{"name": a, "corresponding": f} for a, f in zip(authors, flags)],
        "affiliations": affils,
        "macro_keywords": macro,
        "micro_keywords": micro,
        "kind": kind,
    }


def corpus50() -> list[dict]:
    rng = random.Random(20080101)
    tiers = [10, 5, 2, 6, 3]
    recs = []
    for i in range(50):
        s = tiers[i % 5]
        pub = rng.choice(sorted(BY_SCORE[s]))
        year = 2008 + i % 6
        n_authors = 1 if i % 7 == 0 else rng.randint(2, 5)
        n_inst = 1 if i % 4 == 0 else rng.randint(2, 3)
        corr = ("none", "first", "other")[i % 3]
        recs.append(make_record(
            rng, pub, year, n_authors, n_inst, corr, f"Synthetic study {i + 1:02d}",
            n_macro=rng.randint(1, 3), n_micro=rng.randint(0, 3), dup_country=(i % 5 == 1),
        ))
    # one record repeats a micro keyword to exercise de-duplication
    recs[3]["micro_keywords"] = ["model checking", "model checking", "semantics"]
    return recs


def mixed15() -> list[dict]:
    rng = random.Random(15)
    kinds = ["research"] * 10 + ["editorial", "short", "industry", "other", "editorial"]
    rng.shuffle(kinds)
    return [
        make_record(rng, "TSE" if i % 2 else "ICSE", 2010, rng.randint(1, 3), rng.randint(1, 2),
                    "first", f"Mixed entry {i + 1:02d}", kind=k)
        for i, k in enumerate(kinds)
    ]


def _decompose(target: int, rng: random.Random) -> list[int]:
    parts = []
    while target:
        options = [c for c in (10, 6, 5, 3, 2) if c <= target and target - c != 1]
        c = rng.choice(options[:2])
        parts.append(c)
        target -= c
    return parts


def trends6y() -> list[dict]:
    rng = random.Random(6)
    years = list(range(2008, 2014))
    background = [f"topic {i:02d}" for i in range(1, 20)]
    rising_targets = {2008: 11, 2009: 15, 2010: 21, 2011: 27, 2012: 33, 2013: 37}
    recs = []
    n = 0
    for y in years:
        targets = {kw: 2 * (20 - i) for i, kw in enumerate(background, 1)}
        targets["rising topic"] = rising_targets[y]
        for kw, t in sorted(targets.items()):
            for s in _decompose(t, rng):
                n += 1
                rec = make_record(rng, rng.choice(sorted(BY_SCORE[s])), y, rng.randint(1, 3),
                                  rng.randint(1, 2), "first", f"Trend paper {n:03d}",
                                  n_macro=0, n_micro=1)
                rec["macro_keywords"] = [{"code": "T", "term": kw}]
                recs.append(rec)
    # rank check of the rising keyword, year by year
    for y, want in ((2008, 15), (2013, 2)):
        c: Counter[str] = Counter()
        for r in recs:
            if r["year"] == y:
                c[r["macro_keywords"][0]["term"]] += PUB_SCORE[r["publication_id"]]
        order = sorted(c, key=lambda k: (-c[k], k))
        assert order.index("rising topic") + 1 == want, (y, order.index("rising topic") + 1)
    return recs


def to_xml(recs: list[dict]) -> str:
    from xml.sax.saxutils import escape, quoteattr

    out = ["<papers>"]
    for r in recs:
        out.append(f'  <paper year="{r["year"]}" pub="{r["publication_id"]}" kind="{r["kind"]}">')
        out.append(f"    <title>{escape(r['title'])}</title>")
        for a in r["authors"]:
            flag = "true" if a["corresponding"] else "false"
            out.append(f'    <author corresponding="{flag}">{escape(a["name"])}</author>')
        for f in r["affiliations"]:
            out.append(f"    <affil institution={quoteattr(f['institution'])} country={quoteattr(f['country'])}/>")
        for m in r["macro_keywords"]:
            out.append(f"    <class code={quoteattr(m['code'])} term={quoteattr(m['term'])}/>")
        for k in r["micro_keywords"]:
            out.append(f"    <kw>{escape(k)}</kw>")
        out.append("  </paper>")
    out.append("</papers>")
    return "\n".join(out) + "\n"


def dump_lines(recs: list[dict]) -> str:
    return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in recs)


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    c50 = corpus50()
    assert len(c50) == 50 and {PUB_SCORE[r["publication_id"]] for r in c50} == {10, 6, 5, 3, 2}
    m15 = mixed15()
    assert sum(r["kind"] == "research" for r in m15) == 10
    files = {
        "registry.tsv": registry_tsv(),
        "aliases.tsv": aliases_tsv(),
        "corpus50.jsonl": dump_lines(c50),
        "corpus50_head.xml": to_xml(c50[:8]),
        "mixed15.jsonl": dump_lines(m15),
        "trends6y.jsonl": dump_lines(trends6y()),
    }
    for name, text in files.items():
        (DATA / name).write_text(text, encoding="utf-8")
        print(f"wrote {DATA / name}")


if __name__ == "__main__":
    main()
