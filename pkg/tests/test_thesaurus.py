import numpy as np
import pytest

from scimap.corpus import BibRecord
from scimap.errors import (
    CyclicMerge,
    DuplicateRuleForLabel,
    MalformedRule,
    UnknownAction,
)
from scimap.thesaurus import (
    Action,
    RuleSet,
    ThesaurusRule,
    apply_thesaurus,
    parse_thesaurus,
)


def record(rid, *keywords, year=2010):
    return BibRecord(
        id=rid, title=rid, authors=(), affiliations=(),
        countries=frozenset(), keywords=frozenset(keywords), pub_year=year,
    )


class TestParse:
    def test_merge_rule(self):
        rules = parse_thesaurus(b"coverage criterion\tmerge\tcoverage criteria\n")
        rule = next(iter(rules))
        assert rule.action is Action.MERGE
        assert rule.target == "coverage criteria"

    def test_remove_term_rule(self):
        rules = parse_thesaurus(b"software testing\tremove_term\n")
        assert next(iter(rules)).action is Action.REMOVE_TERM

    def test_cyclic_merge_rejected(self):
        with pytest.raises(CyclicMerge):
            parse_thesaurus(b"a\tmerge\tb\nb\tmerge\ta\n")

    def test_self_merge_rejected(self):
        with pytest.raises(CyclicMerge):
            parse_thesaurus(b"a\tmerge\ta\n")

    def test_duplicate_rule_rejected(self):
        with pytest.raises(DuplicateRuleForLabel):
            parse_thesaurus(b"a\tremove_term\na\tmerge\tb\n")

    def test_unknown_action(self):
        with pytest.raises(UnknownAction):
            parse_thesaurus(b"a\tdelete\n")

    def test_merge_without_target(self):
        with pytest.raises(MalformedRule):
            parse_thesaurus(b"a\tmerge\n")

    def test_header_and_comments_skipped(self):
        rules = parse_thesaurus(
            b"label\taction\ttarget\n# note\n\nTest Cases\tmerge\ttest case\n"
        )
        assert len(rules) == 1
        assert next(iter(rules)).label == "test cases"

    def test_chain_resolved_to_fixpoint(self):
        rules = parse_thesaurus(b"a\tmerge\tb\nb\tmerge\tc\n")
        assert rules.final_label("a") == "c"
        assert rules.final_label("b") == "c"
        assert rules.final_label("c") == "c"


class TestApply:
    def test_remove_term_keeps_record(self):
        out, report = apply_thesaurus(
            [record("r", "k1", "k2")], [ThesaurusRule("k1", Action.REMOVE_TERM)]
        )
        assert len(out) == 1
        assert out[0].keywords == {"k2"}
        assert report.removed_terms == 1
        assert report.removed_records == 0

    def test_remove_term_drops_emptied_record(self):
        out, report = apply_thesaurus(
            [record("r", "k1")], [ThesaurusRule("k1", Action.REMOVE_TERM)]
        )
        assert out == []
        assert report.removed_records == 1

    def test_remove_term_and_studies_drops_record(self):
        corpus = [record("r1", "x", "other"), record("r2", "safe")]
        out, report = apply_thesaurus(
            corpus, [ThesaurusRule("x", Action.REMOVE_TERM_AND_STUDIES)]
        )
        assert [r.id for r in out] == ["r2"]
        assert report.removed_records == 1

    def test_merge_replaces_and_dedupes(self):
        out, report = apply_thesaurus(
            [record("r", "test cases", "test case")],
            [ThesaurusRule("test cases", Action.MERGE, "test case")],
        )
        assert out[0].keywords == {"test case"}
        assert report.merged_labels == 1

    def test_merge_source_that_is_removed_does_not_resurrect(self):
        # removal applies before the merge can turn a into b
        out, _ = apply_thesaurus(
            [record("r", "a", "z")],
            [
                ThesaurusRule("a", Action.REMOVE_TERM),
                ThesaurusRule("b", Action.MERGE, "c"),
            ],
        )
        assert out[0].keywords == {"z"}

    def test_merge_into_removed_target_removes_source(self):
        rules = [
            ThesaurusRule("x", Action.REMOVE_TERM),
            ThesaurusRule("y", Action.MERGE, "x"),
        ]
        out, _ = apply_thesaurus([record("r", "y", "z")], rules)
        assert out[0].keywords == {"z"}
        once, _ = apply_thesaurus([record("r", "y", "z")], rules)
        twice, _ = apply_thesaurus(once, rules)
        assert twice == once

    def test_monotonicity_of_record_count(self):
        corpus = [record(f"r{i}", "a", "b") for i in range(5)]
        out, _ = apply_thesaurus(corpus, [ThesaurusRule("a", Action.MERGE, "b")])
        assert len(out) == len(corpus)
        out2, _ = apply_thesaurus(corpus, [ThesaurusRule("a", Action.REMOVE_TERM)])
        assert len(out2) <= len(corpus)


def random_corpus_and_rules(rng: np.random.Generator):
    labels = [f"kw{i}" for i in range(12)]
    corpus = []
    for i in range(rng.integers(3, 15)):
        size = int(rng.integers(1, 5))
        kws = rng.choice(labels, size=size, replace=False)
        corpus.append(record(f"r{i}", *kws))

    shuffled = list(rng.permutation(labels))
    rules = []
    used = set()
    for _ in range(rng.integers(1, 6)):
        kind = rng.integers(0, 3)
        if kind == 0 and len(shuffled) >= 2:
            # merge within a random acyclic chain: always merge earlier -> later
            a, b = sorted(rng.choice(12, size=2, replace=False))
            source, target = shuffled[a], shuffled[b]
            if source in used:
                continue
            rules.append(ThesaurusRule(source, Action.MERGE, target))
            used.add(source)
        else:
            label = shuffled[int(rng.integers(0, 12))]
            if label in used:
                continue
            action = Action.REMOVE_TERM if kind == 1 else Action.REMOVE_TERM_AND_STUDIES
            rules.append(ThesaurusRule(label, action))
            used.add(label)
    return corpus, rules


def test_idempotence_on_random_rule_sets():
    rng = np.random.default_rng(7)
    for _ in range(100):
        corpus, rules = random_corpus_and_rules(rng)
        rule_set = RuleSet(rules)
        once, _ = apply_thesaurus(corpus, rule_set)
        twice, _ = apply_thesaurus(once, rule_set)
        assert twice == once


def test_removal_reaches_through_merge_chains():
    # a -> b -> c resolved to c; c's removal mode applies to all three
    rules = RuleSet([
        ThesaurusRule("a", Action.MERGE, "b"),
        ThesaurusRule("b", Action.MERGE, "c"),
        ThesaurusRule("c", Action.REMOVE_TERM),
    ])
    out, _ = apply_thesaurus(
        [record("r", "a", "z"), record("r2", "b"), record("r3", "c", "z")], rules
    )
    assert [(r.id, set(r.keywords)) for r in out] == [("r", {"z"}), ("r3", {"z"})]

    rules2 = RuleSet([
        ThesaurusRule("a", Action.MERGE, "b"),
        ThesaurusRule("b", Action.MERGE, "c"),
        ThesaurusRule("c", Action.REMOVE_TERM_AND_STUDIES),
    ])
    out2, report2 = apply_thesaurus([record("r", "a", "z"), record("r2", "z")], rules2)
    assert [r.id for r in out2] == ["r2"]
    assert report2.removed_records == 1


def test_application_preserves_record_order():
    corpus = [record(f"r{i}", "k", "q") for i in range(5)]
    out, _ = apply_thesaurus(corpus, RuleSet([ThesaurusRule("k", Action.REMOVE_TERM)]))
    assert [r.id for r in out] == [f"r{i}" for i in range(5)]


def test_merge_fixpoint_property():
    rng = np.random.default_rng(13)
    for _ in range(50):
        corpus, rules = random_corpus_and_rules(rng)
        rule_set = RuleSet(rules)
        out, _ = apply_thesaurus(corpus, rule_set)
        merge_sources = {r.label for r in rule_set if r.action is Action.MERGE}
        for rec in out:
            assert not (rec.keywords & merge_sources)
