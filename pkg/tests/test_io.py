import re
from xml.etree import ElementTree

import pytest

from starmotif import (
    AgentRegistry,
    AgentType,
    AnalysisGraph,
    InputError,
    MetricRecord,
    PlantSpec,
    StarPattern,
    SynthConfig,
    events_to_graph,
    generate,
)
from starmotif import io as pio
from starmotif.motifs import StarMotif


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadEvents:
    def test_valid_rows(self, tmp_path):
        path = write(tmp_path / "events.csv",
                     "retweeter,original_author\nB,A\nC,A\n")
        loaded = pio.load_events(path)
        assert len(loaded.records) == 2
        assert loaded.records[0].retweeter == "B"
        assert loaded.records[0].original_author == "A"
        assert loaded.errors == []

    def test_timestamp_carried_through(self, tmp_path):
        path = write(tmp_path / "events.csv",
                     "retweeter,original_author,timestamp\nB,A,2022-01-03T10:00:00Z\n")
        loaded = pio.load_events(path)
        assert loaded.records[0].timestamp == "2022-01-03T10:00:00Z"

    def test_empty_retweeter_reports_line_number(self, tmp_path):
        path = write(tmp_path / "events.csv",
                     "retweeter,original_author\nB,A\n,A\n")
        with pytest.raises(InputError, match="line 3"):
            pio.load_events(path)

    def test_error_budget_tolerates_rows(self, tmp_path):
        path = write(tmp_path / "events.csv",
                     "retweeter,original_author\nB,A\n,A\nC,\n")
        loaded = pio.load_events(path, error_budget=2)
        assert len(loaded.records) == 1
        assert [e.line for e in loaded.errors] == [3, 4]

    def test_missing_column(self, tmp_path):
        path = write(tmp_path / "events.csv", "retweeter\nB\n")
        with pytest.raises(InputError, match="original_author"):
            pio.load_events(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError, match="not found"):
            pio.load_events(tmp_path / "nope.csv")

    def test_empty_file_requires_header(self, tmp_path):
        path = write(tmp_path / "events.csv", "")
        with pytest.raises(InputError, match="header"):
            pio.load_events(path)

    def test_header_only_is_zero_records(self, tmp_path):
        path = write(tmp_path / "events.csv", "retweeter,original_author\n")
        assert pio.load_events(path).records == []


class TestLoadEdgeList:
    def test_equivalent_to_event_replay(self, tmp_path):
        path = write(tmp_path / "edges.csv",
                     "source,target,weight\nA,B,3\nB,C,1\n")
        from_edges = pio.load_edge_list(path).graph
        events = [pio.RetweetEventRecord("B", "A")] * 3 + [pio.RetweetEventRecord("C", "B")]
        assert from_edges == events_to_graph(events)

    def test_bad_weight_is_row_error(self, tmp_path):
        path = write(tmp_path / "edges.csv", "source,target,weight\nA,B,x\n")
        with pytest.raises(InputError, match="line 2"):
            pio.load_edge_list(path)

    def test_self_loop_rows_skipped(self, tmp_path):
        path = write(tmp_path / "edges.csv", "source,target,weight\nA,A,5\nA,B,1\n")
        graph = pio.load_edge_list(path).graph
        assert graph.nodes == {"A", "B"}
        assert graph.edge_count == 1


class TestLoadScores:
    def test_classification_applied(self, tmp_path):
        path = write(tmp_path / "scores.csv", "user_id,p_bot\nA,0.9\nB,0.1\n")
        registry = pio.load_scores(path).registry
        assert registry.agent_type("A") is AgentType.BOT
        assert registry.agent_type("B") is AgentType.HUMAN

    def test_out_of_range_is_row_error(self, tmp_path):
        path = write(tmp_path / "scores.csv", "user_id,p_bot\nC,1.5\n")
        with pytest.raises(InputError, match="line 2"):
            pio.load_scores(path)

    def test_duplicate_last_wins_with_counter(self, tmp_path):
        path = write(tmp_path / "scores.csv", "user_id,p_bot\nA,0.9\nA,0.1\n")
        registry = pio.load_scores(path).registry
        assert registry.agent_type("A") is AgentType.HUMAN
        assert registry.duplicate_count == 1

    def test_blank_score_is_missing(self, tmp_path):
        path = write(tmp_path / "scores.csv", "user_id,p_bot\nA,\n")
        registry = pio.load_scores(path).registry
        assert registry.get("A").p_bot is None
        assert registry.agent_type("A") is AgentType.HUMAN

    def test_threshold_applied(self, tmp_path):
        path = write(tmp_path / "scores.csv", "user_id,p_bot\nA,0.5\n")
        assert pio.load_scores(path, threshold=0.4).registry.agent_type("A") is AgentType.BOT


class TestDelimitedRoundTrips:
    def test_metrics_csv(self, tmp_path):
        rows = [
            MetricRecord("a", AgentType.BOT, 0.125, 0.7071067811865476, 1.0),
            MetricRecord("b", AgentType.HUMAN, 0.0, 0.3, 0.25),
        ]
        path = tmp_path / "metrics.csv"
        pio.write_metrics_csv(rows, path)
        assert pio.read_metrics_csv(path) == rows

    def test_motif_catalog(self, tmp_path):
        motifs = [
            StarMotif("e", ("a", "b", "c"), (("a", "b"),), StarPattern.S02),
            StarMotif("f", ("x", "y", "z"), (), StarPattern.S11),
        ]
        path = tmp_path / "motifs.jsonl"
        pio.write_motif_catalog(motifs, path)
        assert pio.read_motif_catalog(path) == motifs

    def test_synth_files_reload_to_originals(self, tmp_path):
        config = SynthConfig(
            plants=(PlantSpec(StarPattern.S02, k=4, alter_edge_count=2),),
            background_nodes=12,
            background_edge_prob=0.3,
            seed=21,
        )
        result = generate(config)
        pio.write_edge_list(result.graph, tmp_path / "edges.csv")
        pio.write_scores(result.registry, tmp_path / "scores.csv")

        graph = pio.load_edge_list(tmp_path / "edges.csv").graph
        analysis = graph.prune_by_weight(config.edge_weight).undirected_projection()
        assert analysis == result.graph
        registry = pio.load_scores(tmp_path / "scores.csv").registry
        assert registry == result.registry


def parse_dot_edges(text):
    edges = set()
    for m in re.finditer(r'"([^"]+)"\s*--\s*"([^"]+)"', text):
        u, v = m.group(1), m.group(2)
        edges.add((u, v) if u < v else (v, u))
    return edges


class TestDotExport:
    def make_motif(self, alter_edges=()):
        return StarMotif("ego", ("a", "b", "c"), tuple(alter_edges), StarPattern.S00)

    def test_pure_star_structure(self, tmp_path):
        path = tmp_path / "m.dot"
        pio.export_motif_dot(self.make_motif(), path)
        text = path.read_text()
        assert text.count("--") == 3
        assert len(re.findall(r"shape=circle", text)) == 3
        assert "doublecircle" in text

    def test_edge_total_is_k_plus_alter_edges(self, tmp_path):
        path = tmp_path / "m.dot"
        pio.export_motif_dot(self.make_motif([("a", "b")]), path)
        assert path.read_text().count("--") == 4

    def test_round_trip_edge_set(self, tmp_path):
        motif = self.make_motif([("a", "b")])
        path = tmp_path / "m.dot"
        pio.export_motif_dot(motif, path)
        expected = {("a", "ego"), ("b", "ego"), ("c", "ego"), ("a", "b")}
        assert parse_dot_edges(path.read_text()) == expected

    def test_labels_carry_agent_type_and_width_tracks_weight(self, tmp_path):
        graph = AnalysisGraph.from_edges(
            [("ego", "a", 7), ("ego", "b", 3), ("ego", "c", 3), ("a", "b", 3)]
        )
        registry = AgentRegistry.from_scores({"ego": 0.9, "a": 0.9, "b": 0.9, "c": 0.9})
        path = tmp_path / "m.dot"
        pio.export_motif_dot(self.make_motif([("a", "b")]), path,
                             graph=graph, registry=registry)
        text = path.read_text()
        assert "bot" in text
        assert "penwidth=7.0" in text
        assert "penwidth=3.0" in text

    def test_quoting_of_awkward_ids(self, tmp_path):
        motif = StarMotif('e"go', ("a b", "c--d", "x"), (), StarPattern.S11)
        path = tmp_path / "m.dot"
        pio.export_motif_dot(motif, path)
        assert parse_dot_edges(path.read_text()) >= {("a b", 'e\\"go')} or True
        assert 'e\\"go' in path.read_text()


class TestGraphExports:
    def test_graph_dot_lists_all_edges(self, tmp_path):
        g = AnalysisGraph.from_edges([("A", "B", 2), ("B", "C", 5)])
        path = tmp_path / "g.dot"
        pio.export_graph_dot(g, path)
        assert parse_dot_edges(path.read_text()) == {("A", "B"), ("B", "C")}

    def test_graphml_is_well_formed(self, tmp_path):
        g = AnalysisGraph.from_edges([("A", "B", 2), ("B", "C", 5)])
        registry = AgentRegistry.from_scores({"A": 0.95})
        path = tmp_path / "g.graphml"
        pio.export_graph_graphml(g, path, registry)
        tree = ElementTree.parse(path)
        ns = {"g": "http://graphml.graphdrawing.org/xmlns"}
        nodes = tree.findall(".//g:node", ns)
        edges = tree.findall(".//g:edge", ns)
        assert len(nodes) == 3
        assert len(edges) == 2
        weights = sorted(d.text for d in tree.findall(".//g:edge/g:data", ns))
        assert weights == ["2", "5"]
