from scimap.corpus import BibRecord, UnitKind
from scimap.layout import mean_pairwise_distance
from scimap.network import build_network, largest_component
from scimap.overlay import average_pub_date
from scimap.pipeline import PipelineConfig, build_item_map, curation_round
from scimap.thesaurus import Action, RuleSet, ThesaurusRule


def record(rid, *keywords, year=2010):
    return BibRecord(
        id=rid, title=rid, authors=(), affiliations=(),
        countries=frozenset(), keywords=frozenset(keywords), pub_year=year,
    )


TEN_RECORDS = [
    record("r1", "alpha", "beta"),
    record("r2", "alpha", "beta", "gamma"),
    record("r3", "alpha", "gamma"),
    record("r4", "beta", "gamma"),
    record("r5", "alpha", "delta"),
    record("r6", "delta", "epsilon"),
    record("r7", "gamma", "epsilon"),
    record("r8", "beta", "delta", "epsilon"),
    record("r9", "alpha", "epsilon"),
    record("r10", "beta", "epsilon"),
]

CONFIG = PipelineConfig(min_occurrences=2, seed=7, restarts=3)


class TestBuildItemMap:
    def test_index_alignment_and_weights(self, corpus):
        config = PipelineConfig(min_occurrences=3, seed=1, restarts=3)
        item_map = build_item_map(corpus, config)
        net, _ = largest_component(
            build_network(corpus, UnitKind.KEYWORD, min_occurrences=3)
        )
        assert [n.label for n in item_map.nodes] == [n.label for n in net.nodes]
        assert [n.id for n in item_map.nodes] == list(range(1, net.n + 1))
        assert [n.occurrences for n in item_map.nodes] == [
            n.occurrences for n in net.nodes
        ]
        assert tuple(n.total_link_strength for n in item_map.nodes) == net.w
        degree = [0] * net.n
        for (i, j) in net.edges:
            degree[i] += 1
            degree[j] += 1
        assert [n.links for n in item_map.nodes] == degree
        assert item_map.record_count == len(corpus)

    def test_layout_constraint_holds(self, corpus):
        item_map = build_item_map(corpus, CONFIG)
        positions = [(n.x, n.y) for n in item_map.nodes]
        assert abs(mean_pairwise_distance(positions) - 1.0) < 1e-9

    def test_cluster_ids_contiguous(self, corpus):
        item_map = build_item_map(corpus, CONFIG)
        ids = sorted({n.cluster for n in item_map.nodes})
        assert ids == list(range(1, len(ids) + 1))

    def test_scores_match_average_pub_date(self, corpus):
        item_map = build_item_map(corpus, CONFIG)
        net, _ = largest_component(
            build_network(corpus, UnitKind.KEYWORD, min_occurrences=2)
        )
        records = {r.id: r for r in corpus}
        for item, node in zip(item_map.nodes, net.nodes):
            if item.score is not None:
                assert item.score == average_pub_date(node, records)

    def test_deterministic(self, corpus):
        a = build_item_map(corpus, CONFIG)
        b = build_item_map(corpus, CONFIG)
        assert a == b

    def test_single_node_map(self):
        corpus = [record(f"r{i}", "only topic") for i in range(5)]
        item_map = build_item_map(corpus, PipelineConfig(min_occurrences=2, restarts=2))
        assert len(item_map.nodes) == 1
        node = item_map.nodes[0]
        assert (node.x, node.y, node.cluster) == (0.0, 0.0, 1)
        assert node.links == 0 and node.total_link_strength == 0
        assert item_map.edges == ()


class TestCurationRound:
    def test_empty_rules_identity(self):
        with_rules, report = curation_round(TEN_RECORDS, RuleSet([]), CONFIG)
        without = build_item_map(TEN_RECORDS, CONFIG)
        assert with_rules == without
        assert report.removed_records == 0

    def test_merge_reduces_node_count_and_unions_support(self):
        # independent expectation: set-union count over the raw records
        base = build_item_map(TEN_RECORDS, CONFIG)
        merged, _ = curation_round(
            TEN_RECORDS, [ThesaurusRule("gamma", Action.MERGE, "delta")], CONFIG
        )
        assert len(merged.nodes) == len(base.nodes) - 1
        expected_occurrences = sum(
            1 for r in TEN_RECORDS if {"gamma", "delta"} & r.keywords
        )
        delta_node = next(n for n in merged.nodes if n.label == "delta")
        assert delta_node.occurrences == expected_occurrences

    def test_remove_term_and_studies_edge_support(self):
        # brute-force expectation: rebuild the network over surviving records
        removed, report = curation_round(
            TEN_RECORDS,
            [ThesaurusRule("gamma", Action.REMOVE_TERM_AND_STUDIES)],
            CONFIG,
        )
        survivors = [r for r in TEN_RECORDS if "gamma" not in r.keywords]
        assert report.removed_records == len(TEN_RECORDS) - len(survivors)
        expected_net, _ = largest_component(
            build_network(survivors, UnitKind.KEYWORD, min_occurrences=2)
        )
        expected_edges = {
            (expected_net.nodes[i].label, expected_net.nodes[j].label): c
            for (i, j), c in expected_net.edges.items()
        }
        got_edges = {
            (removed.nodes[i - 1].label, removed.nodes[j - 1].label): c
            for (i, j, c) in removed.edges
        }
        assert got_edges == expected_edges

    def test_remove_term_keeps_records(self):
        curated, report = curation_round(
            TEN_RECORDS, [ThesaurusRule("beta", Action.REMOVE_TERM)], CONFIG
        )
        assert report.removed_records == 0
        assert curated.record_count == len(TEN_RECORDS)
        assert "beta" not in {n.label for n in curated.nodes}


def test_pipeline_author_unit(corpus):
    config = PipelineConfig(unit=UnitKind.AUTHOR, min_occurrences=2, restarts=2)
    item_map = build_item_map(corpus, config)
    assert all(n.label == n.label.lower() for n in item_map.nodes)
    assert len(item_map.nodes) >= 2


def test_pipeline_country_unit(corpus):
    config = PipelineConfig(unit=UnitKind.COUNTRY, min_occurrences=2, restarts=2)
    item_map = build_item_map(corpus, config)
    assert {n.label for n in item_map.nodes} <= {
        "sweden", "united states", "luxembourg", "south korea"
    }


def test_viewer_golden_fixture_in_sync(corpus):
    """The frontend's golden map JSON is this pipeline's output for the
    synthetic corpus; regenerate the fixture if this fails after an
    intentional schema change."""
    from pathlib import Path

    from scimap.mapfile import write_json

    fixture = Path(__file__).parent.parent / "frontend" / "tests" / "fixtures" / "golden-map.json"
    config = PipelineConfig(min_occurrences=2, seed=11, restarts=3)
    assert write_json(build_item_map(corpus, config)) == fixture.read_bytes()
