import time

import networkx as nx
import numpy as np
import pytest

from netsampler.errors import ConfigError, SamplingError
from netsampler.graph import Graph, average_degree
from netsampler.samplers import (
    ALL_TECHNIQUES,
    SamplerSpec,
    Technique,
    burn_counts,
    edge_uniforms,
    make_rng,
    sample,
    target_size,
    weighted_without_replacement,
)

INDUCED = [t for t in Technique if t.induced]


def _spec(technique, seed=1, **kwargs) -> SamplerSpec:
    return SamplerSpec(technique, seed=seed, **kwargs)


def _is_induced(s) -> bool:
    sub = s.parent.adjacency[s.nodes][:, s.nodes]
    return sub.nnz // 2 == s.m


# ---------------------------------------------------------------------------
# Contracts shared by every technique
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("technique", ALL_TECHNIQUES)
def test_sample_is_subgraph_of_target_size(ba_small, technique):
    _, g = ba_small
    s = sample(g, _spec(technique, seed=3))
    assert s.n == target_size(g.n, 0.15) == 45
    assert s.parent is g
    assert g.has_edges(s.edges).all()
    assert s.technique == technique


@pytest.mark.parametrize("technique", ALL_TECHNIQUES)
def test_same_seed_same_sample(ba_small, technique):
    _, g = ba_small
    a = sample(g, _spec(technique, seed=99))
    b = sample(g, _spec(technique, seed=99))
    assert a.nodes.tolist() == b.nodes.tolist()
    assert a.edges.tolist() == b.edges.tolist()


@pytest.mark.parametrize("technique", INDUCED)
def test_induced_techniques_return_induced_subgraphs(ba_small, technique):
    _, g = ba_small
    s = sample(g, _spec(technique, seed=5))
    assert _is_induced(s)
    assert s.induction_fraction == 1.0


@pytest.mark.parametrize("technique", [Technique.RLS, Technique.RWS, Technique.FFS])
def test_non_induced_samples_carry_no_alpha(ba_small, technique):
    _, g = ba_small
    assert sample(g, _spec(technique)).induction_fraction is None


@pytest.mark.parametrize("base", [Technique.RLS, Technique.RWS, Technique.FFS])
def test_induced_twin_shares_node_set(ba_small, base):
    _, g = ba_small
    twin = {Technique.RLS: Technique.RLI, Technique.RWS: Technique.RWI, Technique.FFS: Technique.FFI}[base]
    assert twin.base is base
    plain = sample(g, _spec(base, seed=17))
    induced = sample(g, _spec(twin, seed=17))
    assert plain.nodes.tolist() == induced.nodes.tolist()
    assert plain.edge_set() <= induced.edge_set()


def test_fraction_rounding():
    assert target_size(100, 0.15) == 15
    assert target_size(2000, 0.15) == 300
    assert target_size(7, 0.5) == 4


def test_target_too_small(toy):
    with pytest.raises(SamplingError):
        sample(toy, _spec(Technique.RNS, target_fraction=0.15))


def test_spec_validation():
    with pytest.raises(ConfigError):
        SamplerSpec("XYZ")
    with pytest.raises(ConfigError):
        SamplerSpec(Technique.FFS, forward_burning_p=1.0)
    with pytest.raises(ConfigError):
        SamplerSpec(Technique.RWS, flyback_c=1.0)
    with pytest.raises(ConfigError):
        SamplerSpec(Technique.RNS, induction_fraction=0.0)
    with pytest.raises(ConfigError):
        SamplerSpec(Technique.RNS, seed=-1)


def test_spec_defaults_follow_environment(monkeypatch):
    monkeypatch.setenv("NETSAMPLER_FORWARD_BURNING_P", "0.5")
    assert SamplerSpec(Technique.FFS).forward_burning_p == 0.5
    assert SamplerSpec(Technique.FFS).target_fraction == 0.15


# ---------------------------------------------------------------------------
# Random selection
# ---------------------------------------------------------------------------

def test_rns_is_uniform(path10):
    counts = np.zeros(path10.n)
    for seed in range(2000):
        s = sample(path10, _spec(Technique.RNS, seed=seed, target_fraction=0.2))
        counts[s.nodes] += 1
    # each node is picked with probability 0.2
    assert counts / 2000 == pytest.approx(np.full(10, 0.2), abs=0.04)


def test_weighted_draw_prefers_hub():
    weights = np.array([10.0] + [1.0] * 10)
    rng = make_rng(0)
    hub = sum(int(weighted_without_replacement(weights, 1, rng)[0][0] == 0) for _ in range(4000))
    assert hub / 4000 == pytest.approx(0.5, abs=0.03)


def test_weighted_draw_uniform_fallback():
    weights = np.array([0.0, 3.0, 0.0, 0.0])
    picked, fallback = weighted_without_replacement(weights, 3, make_rng(4))
    assert fallback
    assert picked[0] == 1
    assert len(set(picked.tolist())) == 3


def test_rnd_flags_fallback_on_edgeless_graph():
    g = Graph.from_edges(10, [], [])
    s = sample(g, _spec(Technique.RND, target_fraction=0.3))
    assert s.n == 3
    assert "uniform-fallback" in s.notes


def test_rnd_oversamples_hubs(star):
    hub_hits = sum(
        0 in sample(star, _spec(Technique.RND, seed=seed, target_fraction=0.2)).node_set()
        for seed in range(500)
    )
    rns_hits = sum(
        0 in sample(star, _spec(Technique.RNS, seed=seed, target_fraction=0.2)).node_set()
        for seed in range(500)
    )
    assert hub_hits > rns_hits


def test_rls_stops_when_k_nodes_covered(ba_small):
    _, g = ba_small
    s = sample(g, _spec(Technique.RLS, seed=8))
    # the last link is the one that brought in the k-th node
    assert s.n == 45
    assert s.m >= s.n // 2


def test_rls_needs_enough_linked_nodes():
    g = Graph.from_edges(10, [0], [1])
    with pytest.raises(SamplingError):
        sample(g, _spec(Technique.RLS, target_fraction=0.5))


# ---------------------------------------------------------------------------
# Exploration
# ---------------------------------------------------------------------------

def test_random_walk_edges_connect_visited_nodes(ba_small):
    _, g = ba_small
    s = sample(g, _spec(Technique.RWS, seed=21))
    assert nx.is_connected(nx.Graph(s.edges.tolist())) or "walk-restarts" in " ".join(s.notes)


def test_random_walk_restarts_on_disconnected_graph():
    # two triangles; a walk trapped in one must restart to cover four nodes
    g = Graph.from_edges(6, [0, 1, 2, 3, 4, 5], [1, 2, 0, 4, 5, 3])
    s = sample(g, _spec(Technique.RWS, seed=2, target_fraction=0.6, stall_factor=2))
    assert s.n == 4
    assert any(n.startswith("walk-restarts=") for n in s.notes)


def test_random_walk_handles_isolated_seed():
    g = Graph.from_edges(5, [0, 1], [1, 2])
    s = sample(g, _spec(Technique.RWS, seed=3, target_fraction=0.8))
    assert s.n == 4


def test_forest_fire_restarts_when_fire_dies(path10):
    s = sample(path10, _spec(Technique.FFS, seed=4, target_fraction=0.9, forward_burning_p=0.05))
    assert s.n == 9


def test_forest_fire_edges_form_a_forest(ba_small):
    _, g = ba_small
    s = sample(g, _spec(Technique.FFS, seed=12))
    burn_tree = nx.Graph()
    burn_tree.add_nodes_from(s.nodes.tolist())
    burn_tree.add_edges_from(s.edges.tolist())
    assert nx.is_forest(burn_tree)


def test_burn_counts_mean():
    draws = burn_counts(make_rng(1), 0.7, size=1_000_000)
    assert draws.min() == 0
    assert draws.mean() == pytest.approx(2.33, abs=0.01)


def test_walk_without_flyback_covers_cycle(cycle10):
    s = sample(cycle10, _spec(Technique.RWS, seed=4, target_fraction=0.95, flyback_c=0.0))
    assert s.n == 10
    walked = nx.Graph()
    walked.add_nodes_from(s.nodes.tolist())
    walked.add_edges_from(s.edges.tolist())
    assert nx.is_connected(walked)


@pytest.mark.parametrize("technique", [Technique.RWS, Technique.RWI])
def test_walk_steps_are_parent_edges_with_flyback(ba_small, technique):
    _, g = ba_small
    for seed in range(20):
        s = sample(g, _spec(technique, seed=seed, flyback_c=0.5))
        assert s.n == 45
        assert g.has_edges(s.edges).all()


@pytest.mark.slow
def test_walk_on_large_sparse_grid_finishes_quickly():
    grid = Graph.from_networkx(nx.convert_node_labels_to_integers(nx.grid_2d_graph(150, 150)))
    started = time.perf_counter()
    s = sample(grid, _spec(Technique.RWS, seed=1))
    assert time.perf_counter() - started < 15.0
    assert s.n == target_size(grid.n, 0.15)
    assert grid.has_edges(s.edges).all()


# ---------------------------------------------------------------------------
# Brute-force oracles on random graphs
# ---------------------------------------------------------------------------

def _random_graphs(count: int = 100):
    rng = np.random.default_rng(2024)
    for i in range(count):
        n = int(rng.integers(20, 61))
        p = float(rng.uniform(0.1, 0.3))
        yield i, Graph.from_networkx(nx.gnp_random_graph(n, p, seed=i))


def _pairs_among(g: Graph, nodes) -> set[tuple[int, int]]:
    """Every parent edge between two of `nodes`, by checking all O(k²) pairs."""
    nodes = sorted(int(v) for v in nodes)
    pairs = [(a, b) for i, a in enumerate(nodes) for b in nodes[i + 1:]]
    if not pairs:
        return set()
    present = g.has_edges(np.array(pairs, dtype=np.int64))
    return {pair for pair, ok in zip(pairs, present) if ok}


def test_samplers_match_pair_enumeration_on_random_graphs():
    for i, g in _random_graphs():
        k = target_size(g.n, 0.3)
        for technique in (Technique.RNS, Technique.RND):
            s = sample(g, _spec(technique, seed=i, target_fraction=0.3))
            assert s.n == k
            assert s.edge_set() == _pairs_among(g, s.nodes)
        for base in (Technique.RLS, Technique.RWS, Technique.FFS):
            twin = {Technique.RLS: Technique.RLI, Technique.RWS: Technique.RWI, Technique.FFS: Technique.FFI}[base]
            plain = sample(g, _spec(base, seed=i, target_fraction=0.3))
            induced = sample(g, _spec(twin, seed=i, target_fraction=0.3))
            assert plain.n - k in (0, 1)
            assert plain.nodes.tolist() == induced.nodes.tolist()
            assert g.has_edges(plain.edges).all()
            assert induced.edge_set() == plain.edge_set() | _pairs_among(g, plain.nodes)


def test_partial_induction_is_monotone_on_random_graphs():
    alphas = (0.25, 0.5, 0.75, 1.0)
    for i, g in _random_graphs():
        for technique in INDUCED:
            edge_sets = [
                sample(g, _spec(technique, seed=i, target_fraction=0.3, induction_fraction=a)).edge_set()
                for a in alphas
            ]
            for smaller, larger in zip(edge_sets, edge_sets[1:]):
                assert smaller <= larger


# ---------------------------------------------------------------------------
# Partial induction
# ---------------------------------------------------------------------------

def test_edge_uniforms_depend_only_on_seed_and_pair():
    pairs = np.array([[0, 1], [2, 5], [3, 4]])
    a = edge_uniforms(9, pairs)
    b = edge_uniforms(9, pairs[::-1])
    assert a.tolist() == b[::-1].tolist()
    assert np.all((a >= 0) & (a < 1))
    assert not np.allclose(a, edge_uniforms(10, pairs))


@pytest.mark.parametrize("technique", INDUCED)
def test_partial_induction_is_monotone(ba_small, technique):
    _, g = ba_small
    edge_sets = [
        sample(g, _spec(technique, seed=31, induction_fraction=alpha)).edge_set()
        for alpha in (0.2, 0.5, 0.8, 1.0)
    ]
    for smaller, larger in zip(edge_sets, edge_sets[1:]):
        assert smaller <= larger


def test_partial_induction_keeps_node_set(ba_small):
    _, g = ba_small
    full = sample(g, _spec(Technique.FFI, seed=6))
    half = sample(g, _spec(Technique.FFI, seed=6, induction_fraction=0.5))
    assert full.nodes.tolist() == half.nodes.tolist()
    assert half.induction_fraction == 0.5


def test_induced_links_raise_average_degree(ba_small):
    _, g = ba_small
    plain = np.mean([average_degree(sample(g, _spec(Technique.RLS, seed=s))) for s in range(20)])
    induced = np.mean([average_degree(sample(g, _spec(Technique.RLI, seed=s))) for s in range(20)])
    assert induced > plain
