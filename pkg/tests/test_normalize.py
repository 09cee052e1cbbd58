import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bibliorank.normalize import (
    AliasConfigError,
    AliasMap,
    CanonicalRecord,
    canonicalize,
    dedupe_within_paper,
    load_alias_maps,
    normalize_key,
)
from bibliorank.records import Authorship, build_corpus
from bibliorank.scoring import Rule, Subject, score_table

from conftest import canon, make_paper


def test_normalize_key():
    assert normalize_key("  Univ.   of\tCalifornia ") == "univ. of california"


class TestAliasMap:
    def test_direct_lookup(self, small_registry):
        m = AliasMap("institution", {"Univ. of California": "University of California"})
        c = canon(small_registry, [make_paper("TSE", ["A"], affils=[("Univ. of California", "USA")])],
                  maps=[m])
        assert c.records[0].institutions == ("University of California",)

    def test_lookup_is_case_and_space_insensitive(self):
        m = AliasMap("institution", {"Univ. of California": "University of California"})
        assert m.get("UNIV.  OF CALIFORNIA") == "University of California"
        assert m.get("university of california") == "University of California"
        assert m.get("Stanford") is None

    def test_chain_rejected(self):
        with pytest.raises(AliasConfigError, match="chain"):
            AliasMap("institution", [("UC", "Univ. of California"),
                                     ("Univ. of California", "University of California")])

    def test_colliding_canonicals_rejected(self):
        with pytest.raises(AliasConfigError, match="collide"):
            AliasMap("scholar", [("a", "Mark Harman"), ("b", "mark harman")])

    def test_conflicting_targets_rejected(self):
        with pytest.raises(AliasConfigError, match="both"):
            AliasMap("keyword", [("x", "Alpha"), ("X", "Beta")])

    def test_file_loader(self):
        text = (
            "# comment\n"
            "kind\traw\tcanonical\n"
            "institution\tUCL\tUniversity College London\n"
            "\n"
            "country\tUnited States\tUSA\n"
            "institution\tU.C.L.\tUniversity College London\n"
        )
        maps = {m.kind.value: m for m in load_alias_maps(io.StringIO(text))}
        assert maps["institution"].get("ucl") == "University College London"
        assert maps["institution"].get("U.C.L.") == "University College London"
        assert maps["country"].get("united states") == "USA"

    @pytest.mark.parametrize("text, msg", [
        ("institution\tUCL\n", "3 tab-separated"),
        ("venue\tx\ty\n", "unknown kind"),
    ])
    def test_file_errors(self, text, msg):
        with pytest.raises(AliasConfigError, match=msg):
            load_alias_maps(io.StringIO(text))

    def test_chain_across_files_rejected(self, small_registry):
        a = AliasMap("institution", {"UC": "Univ. of California"})
        b = AliasMap("institution", {"Univ. of California": "University of California"})
        corpus = build_corpus(small_registry, [make_paper("TSE", ["A"])])
        with pytest.raises(AliasConfigError):
            canonicalize(corpus, [a, b])


class TestCanonicalize:
    def test_empty_maps_passthrough_casefolds(self, small_registry):
        rec = make_paper("TSE", ["Mark  HARMAN", "Lu Zhang"], affils=[("UCL", "UK")],
                         macro=[("723.1", "Computer Programming")], micro=["Model Checking"])
        c = canon(small_registry, [rec]).records[0]
        assert [a.name for a in c.authors] == ["mark harman", "lu zhang"]
        assert c.institutions == ("ucl",)
        assert c.countries == ("uk",)
        assert c.macro_keywords == (("723.1", "computer programming"),)
        assert c.micro_keywords == ("model checking",)

    def test_strict_drops_unmatched_institutions_only(self, small_registry):
        m = AliasMap("institution", {"UCL": "University College London"})
        rec = make_paper("TSE", ["A"], affils=[("Rare Abbrev Inst", "UK"), ("UCL", "UK")])
        c = canon(small_registry, [rec], maps=[m], policy="strict")
        assert c.records[0].institutions == (None, "University College London")
        assert c.records[0].countries == ("uk",)
        assert [(d.record, d.field, d.raw) for d in c.dropped] == [(0, "institution", "Rare Abbrev Inst")]

    def test_strict_dropped_slot_gets_no_credit_and_shifts_nothing(self, small_registry):
        m = AliasMap("institution", {"UCL": "University College London"})
        rec = make_paper("IST", ["A"], affils=[("Rare Abbrev Inst", "UK"), ("UCL", "UK")])
        c = canon(small_registry, [rec], maps=[m], policy="strict")
        t = score_table(c.records, Subject.INSTITUTION)
        assert t.halves == {"University College London": 5}

    def test_three_aliases_merge_and_conserve_mass(self, registry, raw50, alias_maps):
        raw_c = canonicalize(build_corpus(registry, raw50))
        merged = canonicalize(build_corpus(registry, raw50), alias_maps)
        variants = ["university of california", "univ. of california", "uc system"]
        seen = {v for r in raw_c.records for v in r.institutions if v in variants}
        assert seen == set(variants)
        for rule in Rule:
            before = score_table(raw_c.records, Subject.INSTITUTION, rule)
            after = score_table(merged.records, Subject.INSTITUTION, rule)
            assert after.halves["University of California"] == sum(before.halves.get(v, 0) for v in variants)
            assert "univ. of california" not in after and "uc system" not in after

    def test_idempotent(self, corpus50, alias_maps):
        assert canonicalize(corpus50, alias_maps) == corpus50

    def test_idempotent_strict(self, registry, raw50, alias_maps):
        m = [m for m in alias_maps if m.kind.value != "institution"]
        m.append(AliasMap("institution", {"TU Munich": "TU Munich", "UC System": "University of California"}))
        once = canonicalize(build_corpus(registry, raw50), m, "strict")
        assert once.dropped
        assert canonicalize(once, m, "strict") == once

    def test_record_order_independent(self, registry, raw50, alias_maps):
        fwd = canonicalize(build_corpus(registry, raw50), alias_maps)
        rev = canonicalize(build_corpus(registry, raw50[::-1]), alias_maps)
        assert fwd.records == rev.records[::-1]


class TestDedupe:
    def _rec(self, **kw):
        base = dict(title="t", publication_id="TSE", year=2010, basic_score=10,
                    authors=(Authorship("a"), Authorship("a")), institutions=("i",), countries=("c",))
        base.update(kw)
        return CanonicalRecord(**base)

    def test_countries_first_occurrence(self):
        r = dedupe_within_paper(self._rec(countries=("usa", "usa", "china")))
        assert r.countries == ("usa", "china")

    def test_identity_on_distinct(self):
        r = self._rec(institutions=("i1", "i2"), countries=("x", "y"), micro_keywords=("a", "b"))
        assert dedupe_within_paper(r) == r

    def test_keywords_and_institutions(self):
        r = dedupe_within_paper(self._rec(institutions=("i1", "i2", "i1"), micro_keywords=("a", "a", "b"),
                                          macro_keywords=(("1", "x"), ("1", "x"))))
        assert r.institutions == ("i1", "i2")
        assert r.micro_keywords == ("a", "b")
        assert r.macro_keywords == (("1", "x"),)

    def test_authors_never_deduped(self):
        assert len(dedupe_within_paper(self._rec()).authors) == 2

    def test_duplicate_micro_keyword_scores_once(self, small_registry):
        c = canon(small_registry, [make_paper("TSE", ["A"], micro=["a", "a", "b"])])
        t = score_table(c.records, Subject.MICRO_KEYWORD)
        assert t["a"] == 10 and t["b"] == 10

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.sampled_from("abcd"), min_size=1, max_size=6),
           st.lists(st.sampled_from("xyz"), min_size=1, max_size=6))
    def test_first_element_kept(self, insts, countries):
        r = dedupe_within_paper(self._rec(institutions=tuple(insts), countries=tuple(countries),
                                          micro_keywords=tuple(insts)))
        assert r.institutions[0] == insts[0]
        assert r.countries[0] == countries[0]
        assert r.micro_keywords[0] == insts[0]
        assert len(set(r.countries)) == len(r.countries)
        assert dedupe_within_paper(r) == r
