import gzip

import networkx as nx
import numpy as np
import pytest

from netsampler.errors import EdgeListParseError, EmptyGraphError, NetSamplerError
from netsampler.graph import (
    Graph,
    PropertyKind,
    Sample,
    average_clustering,
    average_degree,
    clustering_distribution,
    degree_distribution,
    density,
    induced_subgraph,
    load_edge_list,
    summarize,
    triangles,
    write_edge_list,
)


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

def test_toy_fixture_sizes(toy):
    assert (toy.n, toy.m) == (5, 5)
    assert toy.labels == ("1", "2", "3", "4", "5")


def test_toy_ingest_stats(toy):
    stats = toy.ingest
    assert stats.comments == 3
    assert stats.duplicates == 1
    assert stats.self_loops == 0
    assert stats.lines == 9


def test_reverse_and_self_loop_collapse(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("1 2\n2 1\n3 3\n")
    g = load_edge_list(path)
    assert (g.n, g.m) == (3, 1)
    assert g.ingest.self_loops == 1
    assert g.ingest.duplicates == 1
    # node 3 is kept as isolated
    assert g.degrees.tolist() == [1, 1, 0]


def test_comments_and_blank_lines_only_is_empty(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("# nothing here\n\n# still nothing\n")
    with pytest.raises(EmptyGraphError):
        load_edge_list(path)


def test_malformed_line_reports_position(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("1 2\n3\n")
    with pytest.raises(EdgeListParseError) as info:
        load_edge_list(path)
    assert info.value.line_number == 2
    assert "bad.txt:2" in str(info.value)


def test_three_tokens_is_an_error(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("1 2 3\n")
    with pytest.raises(EdgeListParseError):
        load_edge_list(path)


def test_gzip_input(tmp_path, toy_path):
    path = tmp_path / "toy.txt.gz"
    with gzip.open(path, "wt") as fh:
        fh.write(toy_path.read_text())
    g = load_edge_list(path)
    assert (g.n, g.m) == (5, 5)


def test_tab_separated_snap_header(tmp_path):
    path = tmp_path / "snap.txt"
    path.write_text("# Directed graph\n# FromNodeId\tToNodeId\n10\t20\n20\t30\n30\t10\n")
    g = load_edge_list(path)
    assert (g.n, g.m) == (3, 3)


def test_adjacency_sorted_and_symmetric(ba_small):
    nxg, g = ba_small
    for u in range(g.n):
        nbrs = g.neighbors(u)
        assert np.all(np.diff(nbrs) > 0)
        for v in nbrs.tolist():
            assert u in g.neighbors(v)
    assert g.m == nxg.number_of_edges()


def test_from_edges_rejects_out_of_range():
    with pytest.raises(NetSamplerError):
        Graph.from_edges(2, [0], [5])


def test_has_edges(toy):
    pairs = np.array([[0, 1], [1, 0], [0, 4], [3, 4]])
    assert toy.has_edges(pairs).tolist() == [True, True, False, True]


# ---------------------------------------------------------------------------
# Writing
# ---------------------------------------------------------------------------

def test_write_then_load_keeps_sizes(tmp_path, toy):
    out = write_edge_list(toy, tmp_path / "out.txt")
    again = load_edge_list(out)
    assert (again.n, again.m) == (toy.n, toy.m)
    assert "# Nodes: 5 Edges: 5" in out.read_text()


def test_write_keeps_isolated_nodes(tmp_path):
    g = Graph.from_edges(4, [0], [1], ["a", "b", "c", "d"])
    again = load_edge_list(write_edge_list(g, tmp_path / "iso.txt"))
    assert (again.n, again.m) == (4, 1)
    assert sorted(again.labels) == ["a", "b", "c", "d"]


def test_write_sample_uses_parent_labels(tmp_path, toy):
    s = induced_subgraph(toy, [0, 1, 2])
    text = write_edge_list(s, tmp_path / "s.txt").read_text()
    assert "1\t2" in text and "4" not in text.split("\n", 3)[-1]


# ---------------------------------------------------------------------------
# Subgraphs and samples
# ---------------------------------------------------------------------------

def test_induced_subgraph_matches_networkx(ba_small):
    nxg, g = ba_small
    rng = np.random.default_rng(3)
    nodes = rng.choice(g.n, size=60, replace=False)
    s = induced_subgraph(g, nodes)
    expected = nxg.subgraph(nodes.tolist())
    assert s.m == expected.number_of_edges()
    assert s.edge_set() == {(min(a, b), max(a, b)) for a, b in expected.edges()}


def test_induced_subgraph_empty_and_range(toy):
    assert induced_subgraph(toy, []).n == 0
    with pytest.raises(NetSamplerError):
        induced_subgraph(toy, [7])


def test_sample_rejects_foreign_edges(toy):
    with pytest.raises(NetSamplerError):
        Sample(parent=toy, nodes=[0, 4], edges=[[0, 4]])


def test_sample_rejects_edge_outside_node_set(toy):
    with pytest.raises(NetSamplerError):
        Sample(parent=toy, nodes=[0], edges=[[0, 1]])


def test_sample_normalizes_edges(toy):
    s = Sample(parent=toy, nodes=[2, 1, 0], edges=[[1, 0], [0, 1], [2, 1]])
    assert s.nodes.tolist() == [0, 1, 2]
    assert s.edges.tolist() == [[0, 1], [1, 2]]


def test_sample_to_graph_relabels(toy):
    s = induced_subgraph(toy, [2, 3, 4])
    g = s.to_graph()
    assert (g.n, g.m) == (3, 2)
    assert g.labels == ("3", "4", "5")


# ---------------------------------------------------------------------------
# Properties
# ---------------------------------------------------------------------------

def test_toy_properties(toy):
    assert degree_distribution(toy).values.tolist() == [1, 2, 2, 2, 3]
    assert average_degree(toy) == pytest.approx(2.0)
    assert density(toy) == pytest.approx(0.5)
    clustering = sorted(clustering_distribution(toy).values.tolist())
    assert clustering == pytest.approx([0.0, 0.0, 1 / 3, 1.0, 1.0])
    assert average_clustering(toy) == pytest.approx(0.466667, abs=1e-5)


def test_toy_summary(toy):
    summary = summarize(toy)
    assert summary.to_dict() == pytest.approx(
        {"nodes": 5, "edges": 5, "average_degree": 2.0, "clustering": 7 / 15, "density": 0.5}
    )


def test_triangle_and_complete_graph(triangle, complete10):
    assert clustering_distribution(triangle).values.tolist() == [1.0, 1.0, 1.0]
    assert density(complete10) == pytest.approx(1.0)
    assert triangles(complete10).tolist() == [36] * 10


def test_star_has_zero_clustering(star):
    assert clustering_distribution(star).values.max() == 0.0
    assert degree_distribution(star).values.tolist() == [1] * 10 + [10]


def test_clustering_matches_networkx(ba_small, er_medium):
    for nxg, g in (ba_small, er_medium):
        expected = nx.clustering(nxg)
        ours = clustering_distribution(g).values
        assert ours == pytest.approx(sorted(expected[v] for v in nxg.nodes()))
        assert average_clustering(g) == pytest.approx(nx.average_clustering(nxg))


def test_density_needs_two_nodes():
    single = Graph.from_edges(1, [], [])
    with pytest.raises(NetSamplerError):
        density(single)
    assert summarize(single).density is None


def test_distribution_cdf(toy):
    dist = degree_distribution(toy)
    assert dist.kind == PropertyKind.DEGREE
    assert dist.cdf([0, 1, 2, 3, 10]).tolist() == pytest.approx([0.0, 0.2, 0.8, 1.0, 1.0])


def test_properties_accept_samples(toy):
    s = induced_subgraph(toy, [0, 1, 2])
    assert average_degree(s) == pytest.approx(2.0)
    assert density(s) == pytest.approx(1.0)
