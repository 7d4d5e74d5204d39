"""Analyst curation rules: merges and two removal modes.

A thesaurus is a set of rules keyed by canonical label. ``merge`` replaces
a label with its target everywhere; ``remove_term`` deletes the label but
keeps the record as long as other keywords remain; ``remove_term_and_studies``
drops every record that lists the label. Removal wins over merging: a label
whose merge target carries a removal rule is treated as removed itself, so a
merge can never resurrect a removed label and applying the rule set twice
equals applying it once.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import IO, Iterable

from .corpus import BibRecord, canonicalize_label
from .errors import CyclicMerge, DuplicateRuleForLabel, MalformedRule, UnknownAction

__all__ = [
    "Action",
    "ThesaurusRule",
    "RuleSet",
    "CleanupReport",
    "parse_thesaurus",
    "apply_thesaurus",
]

THESAURUS_HEADER = "label\taction\ttarget"


class Action(str, Enum):
    MERGE = "merge"
    REMOVE_TERM = "remove_term"
    REMOVE_TERM_AND_STUDIES = "remove_term_and_studies"


@dataclass(frozen=True)
class ThesaurusRule:
    """One curation action for one label."""

    label: str
    action: Action
    target: str | None = None

    def __post_init__(self):
        if self.action is Action.MERGE:
            if not self.target:
                raise MalformedRule(f"merge rule for {self.label!r} has no target")
            if self.target == self.label:
                raise CyclicMerge(f"label merges into itself: {self.label!r}")
        elif self.target:
            raise MalformedRule(f"{self.action.value} rule for {self.label!r} has a target")

    def to_tsv_line(self) -> str:
        return f"{self.label}\t{self.action.value}\t{self.target or ''}".rstrip("\t")


class RuleSet:
    """Validated rule collection with merge chains resolved to a fixpoint."""

    def __init__(self, rules: Iterable[ThesaurusRule]):
        self.rules: dict[str, ThesaurusRule] = {}
        for rule in rules:
            if rule.label in self.rules:
                raise DuplicateRuleForLabel(f"duplicate rule for label {rule.label!r}")
            self.rules[rule.label] = rule
        self._merge_target = self._resolve_merges()
        self._removal: dict[str, Action] = {
            r.label: r.action for r in self.rules.values() if r.action is not Action.MERGE
        }

    def __iter__(self):
        return iter(self.rules.values())

    def __len__(self):
        return len(self.rules)

    def _resolve_merges(self) -> dict[str, str]:
        graph = {
            r.label: r.target for r in self.rules.values() if r.action is Action.MERGE
        }
        resolved: dict[str, str] = {}
        for start in graph:
            seen = [start]
            node = start
            while node in graph:
                node = graph[node]
                if node in seen:
                    cycle = " -> ".join(seen + [node])
                    raise CyclicMerge(f"merge cycle: {cycle}")
                seen.append(node)
            for label in seen[:-1]:
                resolved[label] = node
        return resolved

    def final_label(self, label: str) -> str:
        """The label after merge-chain resolution (identity if unmerged)."""
        return self._merge_target.get(label, label)

    def removal_mode(self, label: str) -> Action | None:
        """Removal action that applies to ``label``, directly or through its merge target."""
        direct = self._removal.get(label)
        if direct is not None:
            return direct
        return self._removal.get(self.final_label(label))


@dataclass
class CleanupReport:
    """Counters for one thesaurus application."""

    merged_labels: int = 0
    removed_terms: int = 0
    removed_records: int = 0
    rounds: int = 1


def parse_thesaurus(tsv_source: bytes | str | IO[str]) -> RuleSet:
    """Parse a thesaurus TSV (columns: label, action, target; '#' comments).

    Labels and targets are canonicalized. The header line is optional.
    """
    if isinstance(tsv_source, bytes):
        text = tsv_source.decode("utf-8-sig")
    elif isinstance(tsv_source, str):
        text = tsv_source
    else:
        text = tsv_source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8-sig")

    rules = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = [p.strip() for p in line.split("\t")]
        if [p.lower() for p in parts[:3]] == ["label", "action", "target"] or [
            p.lower() for p in parts[:2]
        ] == ["label", "action"]:
            continue
        if len(parts) < 2:
            raise MalformedRule(f"line {lineno}: expected label<TAB>action[<TAB>target]")
        label = canonicalize_label(parts[0])
        action_raw = parts[1].strip().lower()
        target = canonicalize_label(parts[2]) if len(parts) > 2 and parts[2] else None
        if not label:
            raise MalformedRule(f"line {lineno}: empty label")
        try:
            action = Action(action_raw)
        except ValueError:
            raise UnknownAction(f"line {lineno}: unknown action {action_raw!r}")
        rules.append(ThesaurusRule(label, action, target or None))
    return RuleSet(rules)


def apply_thesaurus(
    records: Iterable[BibRecord], rules: RuleSet | Iterable[ThesaurusRule]
) -> tuple[list[BibRecord], CleanupReport]:
    """Apply curation rules to a corpus. Idempotent.

    Per record: drop it if any keyword (directly or through its merge
    target) carries a study-removal rule; delete keywords carrying a
    term-only removal; map survivors through merge fixpoints and dedupe;
    drop the record if nothing remains.
    """
    if not isinstance(rules, RuleSet):
        rules = RuleSet(rules)
    report = CleanupReport()
    merged_seen: set[str] = set()
    removed_seen: set[str] = set()
    out: list[BibRecord] = []

    for record in records:
        dropped = False
        kept: set[str] = set()
        for keyword in record.keywords:
            mode = rules.removal_mode(keyword)
            if mode is Action.REMOVE_TERM_AND_STUDIES:
                dropped = True
                break
            if mode is Action.REMOVE_TERM:
                removed_seen.add(keyword)
                continue
            final = rules.final_label(keyword)
            if final != keyword:
                merged_seen.add(keyword)
            kept.add(final)
        if dropped or not kept:
            report.removed_records += 1
            continue
        if kept == set(record.keywords):
            out.append(record)
        else:
            out.append(
                BibRecord(
                    id=record.id,
                    title=record.title,
                    authors=record.authors,
                    affiliations=record.affiliations,
                    countries=record.countries,
                    keywords=frozenset(kept),
                    pub_year=record.pub_year,
                    pub_month=record.pub_month,
                    venue=record.venue,
                    citations=record.citations,
                )
            )
    report.merged_labels = len(merged_seen)
    report.removed_terms = len(removed_seen)
    return out, report
