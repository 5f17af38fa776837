from pathlib import Path

import networkx as nx
import pytest

from netsampler.graph import Graph, load_edge_list
from netsampler.journal import journal

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def _isolated_state(monkeypatch, tmp_path):
    """Keep the ledger and default output out of the repo, start with an empty journal."""
    monkeypatch.setenv("NETSAMPLER_LEDGER_PATH", str(tmp_path / "ledger.db"))
    monkeypatch.setenv("NETSAMPLER_OUTPUT_DIR", str(tmp_path / "results"))
    journal.clear()
    yield
    journal.clear()


@pytest.fixture
def toy_path() -> Path:
    return FIXTURES / "toy.txt"


@pytest.fixture
def toy(toy_path) -> Graph:
    return load_edge_list(toy_path)


@pytest.fixture
def triangle() -> Graph:
    return Graph.from_edges(3, [0, 1, 2], [1, 2, 0])


@pytest.fixture
def star() -> Graph:
    """Hub 0 with ten leaves."""
    return Graph.from_networkx(nx.star_graph(10))


@pytest.fixture
def complete10() -> Graph:
    return Graph.from_networkx(nx.complete_graph(10))


@pytest.fixture
def path10() -> Graph:
    return Graph.from_networkx(nx.path_graph(10))


@pytest.fixture
def cycle10() -> Graph:
    return Graph.from_networkx(nx.cycle_graph(10))


@pytest.fixture
def ba_small():
    """(networkx graph, Graph) pair, 300 nodes, ⟨k⟩ ≈ 6."""
    nxg = nx.barabasi_albert_graph(300, 3, seed=11)
    return nxg, Graph.from_networkx(nxg)


@pytest.fixture
def er_medium():
    nxg = nx.gnp_random_graph(200, 0.05, seed=5)
    return nxg, Graph.from_networkx(nxg)

