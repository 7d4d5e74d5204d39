"""End-to-end map construction.

Chains the stages: curated records -> thresholded co-occurrence network
-> largest component -> association-strength similarities -> 2-D layout
with canonical orientation -> cluster assignment -> overlay scores ->
:class:`ItemMap`. Every stage is deterministic given the configuration
seed, so a corpus, a thesaurus, and a config fully determine every
output byte.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable

from .clustering import cluster
from .corpus import BibRecord, UnitKind
from .layout import LayoutConfig, canonical_transform, optimize_layout
from .mapfile import ItemMap, ItemNode
from .network import build_network, largest_component
from .overlay import compute_overlay_scores
from .similarity import association_strength
from .thesaurus import CleanupReport, RuleSet, apply_thesaurus

logger = logging.getLogger(__name__)

__all__ = ["PipelineConfig", "build_item_map", "curation_round"]


@dataclass(frozen=True)
class PipelineConfig:
    unit: UnitKind = UnitKind.KEYWORD
    min_occurrences: int = 20
    resolution: float = 1.0
    seed: int = 42
    restarts: int = 10
    max_iterations: int = 1000
    rel_tolerance: float = 1e-6
    jitter_epsilon: float = 1e-9

    def __post_init__(self):
        if self.min_occurrences < 1:
            raise ValueError("min_occurrences must be >= 1")
        if self.resolution < 0:
            raise ValueError("resolution must be >= 0")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")

    def layout_config(self) -> LayoutConfig:
        return LayoutConfig(
            seed=self.seed,
            restarts=self.restarts,
            max_iterations=self.max_iterations,
            rel_tolerance=self.rel_tolerance,
            jitter_epsilon=self.jitter_epsilon,
        )

    @classmethod
    def from_dict(cls, raw: dict) -> "PipelineConfig":
        return cls(
            unit=UnitKind(raw.get("unit", "keyword")),
            min_occurrences=raw.get("min_occurrences", 20),
            resolution=raw.get("resolution", 1.0),
            seed=raw.get("seed", 42),
            restarts=raw.get("restarts", 10),
            max_iterations=raw.get("max_iterations", 1000),
            rel_tolerance=raw.get("rel_tolerance", 1e-6),
            jitter_epsilon=raw.get("jitter_epsilon", 1e-9),
        )


def build_item_map(records: Iterable[BibRecord], config: PipelineConfig) -> ItemMap:
    """Run network building, layout, clustering, and overlay scoring.

    Nodes outside the largest connected component are dropped (and
    logged); a single-node network short-circuits to a map with the node
    at the origin.
    """
    records = list(records)
    net = build_network(records, config.unit, config.min_occurrences)
    net, dropped = largest_component(net)
    if dropped:
        logger.info(
            "dropped %d node(s) outside the largest component: %s",
            len(dropped),
            ", ".join(dropped[:10]) + ("..." if len(dropped) > 10 else ""),
        )

    overlay = compute_overlay_scores(net, records)
    if net.n == 1:
        node = net.nodes[0]
        item = ItemNode(
            id=1,
            label=node.label,
            x=0.0,
            y=0.0,
            cluster=1,
            occurrences=node.occurrences,
            links=0,
            total_link_strength=0,
            score=overlay.scores[0],
        )
        return ItemMap(
            nodes=(item,),
            edges=(),
            config=config,
            record_count=len(records),
            score_low=overlay.clamp_low,
            score_high=overlay.clamp_high,
        )

    sims = association_strength(net)
    layout = optimize_layout(sims, config.layout_config())
    if not layout.converged:
        logger.warning("layout did not converge within %d iterations", config.max_iterations)
    positions = canonical_transform(layout.positions)
    clusters = cluster(
        sims, gamma=config.resolution, seed=config.seed, restarts=config.restarts
    )

    degree = [0] * net.n
    for (i, j) in net.edges:
        degree[i] += 1
        degree[j] += 1
    strengths = net.w

    nodes = tuple(
        ItemNode(
            id=i + 1,
            label=net.nodes[i].label,
            x=float(positions[i, 0]),
            y=float(positions[i, 1]),
            cluster=clusters.assignment[i],
            occurrences=net.nodes[i].occurrences,
            links=degree[i],
            total_link_strength=strengths[i],
            score=overlay.scores[i],
        )
        for i in range(net.n)
    )
    edges = tuple((i + 1, j + 1, c) for (i, j), c in sorted(net.edges.items()))
    return ItemMap(
        nodes=nodes,
        edges=edges,
        config=config,
        record_count=len(records),
        score_low=overlay.clamp_low,
        score_high=overlay.clamp_high,
    )


def curation_round(
    records: Iterable[BibRecord],
    rules: RuleSet | Iterable,
    config: PipelineConfig,
) -> tuple[ItemMap, CleanupReport]:
    """One cleanup-and-rebuild round: apply the thesaurus, then map."""
    curated, report = apply_thesaurus(records, rules)
    return build_item_map(curated, config), report
