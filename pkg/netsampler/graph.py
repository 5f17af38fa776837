"""
Graph core — load, normalise, store and measure simple undirected graphs.

Graphs are held in CSR form (numpy `indptr` / `indices`) with every adjacency
list sorted ascending, plus the original external node labels. A Sample is a
node set and edge set over a parent Graph, tagged with the technique that drew
it. Both are immutable after construction and safe to read from many threads.

Edge-list format (SNAP exports):
  # comment lines start with '#'
  <label_u> <whitespace> <label_v>
Direction is collapsed, self-loops and duplicate edges are dropped and counted.
"""

import gzip
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np
import scipy.sparse as sp

from .errors import EdgeListParseError, EmptyGraphError, NetSamplerError

# Rows per block when counting triangles through sparse products.
_TRIANGLE_BLOCK = 4096


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IngestOptions:
    """How an edge list is read."""
    comment_prefix: str = "#"
    delimiter: Optional[str] = None  # None splits on any whitespace


@dataclass(frozen=True)
class IngestStats:
    """What the loader saw and what it silently dropped."""
    lines: int = 0
    comments: int = 0
    self_loops: int = 0
    duplicates: int = 0

    def to_dict(self) -> dict:
        return {
            "lines": self.lines,
            "comments": self.comments,
            "self_loops": self.self_loops,
            "duplicates": self.duplicates,
        }


@dataclass(frozen=True, eq=False)
class Graph:
    """
    Immutable simple undirected graph on nodes 0..n-1.

    `indices[indptr[u]:indptr[u+1]]` are the neighbours of u, sorted ascending.
    Each edge appears twice in the CSR arrays, so len(indices) == 2m.
    """
    indptr: np.ndarray
    indices: np.ndarray
    labels: tuple[str, ...]
    ingest: IngestStats = field(default_factory=IngestStats)

    def __post_init__(self):
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)

    @classmethod
    def from_edges(
        cls,
        n: int,
        sources: Iterable[int],
        targets: Iterable[int],
        labels: Optional[Iterable[str]] = None,
        *,
        lines: int = 0,
        comments: int = 0,
    ) -> "Graph":
        """Build a Graph from endpoint arrays, dropping self-loops and duplicates."""
        u = np.asarray(sources, dtype=np.int64).ravel()
        v = np.asarray(targets, dtype=np.int64).ravel()
        if u.shape != v.shape:
            raise NetSamplerError("source and target arrays differ in length")
        if u.size and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
            raise NetSamplerError(f"edge endpoint out of range [0, {n})")

        loops = u == v
        lo = np.minimum(u[~loops], v[~loops])
        hi = np.maximum(u[~loops], v[~loops])
        keys = np.unique(lo * n + hi)
        lo, hi = keys // n, keys % n

        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])

        if labels is None:
            labels = (str(i) for i in range(n))
        labels = tuple(labels)
        if len(labels) != n:
            raise NetSamplerError(f"expected {n} labels, got {len(labels)}")

        self_loops = int(loops.sum())
        stats = IngestStats(
            lines=lines,
            comments=comments,
            self_loops=self_loops,
            duplicates=int(u.size - self_loops - keys.size),
        )
        return cls(indptr=indptr, indices=dst[order], labels=labels, ingest=stats)

    @classmethod
    def from_networkx(cls, g) -> "Graph":
        """Convert a networkx graph; node labels become their str() form."""
        nodes = list(g.nodes())
        index = {node: i for i, node in enumerate(nodes)}
        pairs = [(index[a], index[b]) for a, b in g.edges()]
        sources = [a for a, _ in pairs]
        targets = [b for _, b in pairs]
        return cls.from_edges(len(nodes), sources, targets, [str(x) for x in nodes])

    # --- size ---

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.diff(self.indptr)
        deg.setflags(write=False)
        return deg

    # --- adjacency ---

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    @cached_property
    def edges(self) -> np.ndarray:
        """(m, 2) array of (lo, hi) pairs in lexicographic order."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        keep = rows < self.indices
        pairs = np.column_stack([rows[keep], self.indices[keep]])
        pairs.setflags(write=False)
        return pairs

    @cached_property
    def edge_keys(self) -> np.ndarray:
        keys = self.edges[:, 0] * self.n + self.edges[:, 1]
        keys.setflags(write=False)
        return keys

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        data = np.ones(len(self.indices), dtype=np.float64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def has_edges(self, pairs: np.ndarray) -> np.ndarray:
        """Boolean mask: which (u, v) rows of `pairs` are edges of this graph."""
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        if not len(pairs) or not self.m:
            return np.zeros(len(pairs), dtype=bool)
        keys = np.minimum(pairs[:, 0], pairs[:, 1]) * self.n + np.maximum(pairs[:, 0], pairs[:, 1])
        pos = np.minimum(np.searchsorted(self.edge_keys, keys), self.m - 1)
        return self.edge_keys[pos] == keys

    def gather_neighbors(self, nodes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Flattened (row, neighbour) pairs for every node in `nodes`, in CSR order."""
        nodes = np.asarray(nodes, dtype=np.int64)
        counts = self.degrees[nodes]
        starts = self.indptr[nodes]
        total = int(counts.sum())
        shift = np.repeat(starts - (np.cumsum(counts) - counts), counts)
        return np.repeat(nodes, counts), self.indices[shift + np.arange(total, dtype=np.int64)]


@dataclass(frozen=True, eq=False)
class Sample:
    """
    Sampled subgraph G' = (V', E') of a parent Graph.

    `nodes` are sorted parent indices; `edges` are sorted (lo, hi) parent pairs
    whose endpoints are all in `nodes`. Isolated sampled nodes are allowed.
    """
    parent: Graph
    nodes: np.ndarray
    edges: np.ndarray
    technique: Optional[str] = None
    seed: Optional[int] = None
    induction_fraction: Optional[float] = None
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        nodes = np.unique(np.asarray(self.nodes, dtype=np.int64))
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if len(edges):
            edges = np.column_stack([edges.min(axis=1), edges.max(axis=1)])
            edges = np.unique(edges, axis=0)
        if nodes.size and (nodes[0] < 0 or nodes[-1] >= self.parent.n):
            raise NetSamplerError(f"sample node out of range [0, {self.parent.n})")
        if len(edges):
            pos = np.searchsorted(nodes, edges)
            if np.any(pos >= nodes.size) or np.any(nodes[np.minimum(pos, nodes.size - 1)] != edges):
                raise NetSamplerError("sample edge endpoint outside the sampled node set")
            if not self.parent.has_edges(edges).all():
                raise NetSamplerError("sample edge is not an edge of the parent graph")
        nodes.setflags(write=False)
        edges.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self.edges)

    def node_set(self) -> set[int]:
        return set(self.nodes.tolist())

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(a), int(b)) for a, b in self.edges}

    def tagged(self, **provenance) -> "Sample":
        """Copy with technique / seed / induction_fraction / notes filled in."""
        return replace(self, **provenance)

    @cached_property
    def graph(self) -> Graph:
        """The sample as an independent Graph, labelled with parent labels."""
        local = np.searchsorted(self.nodes, self.edges) if len(self.edges) else np.zeros((0, 2), np.int64)
        labels = [self.parent.labels[i] for i in self.nodes.tolist()]
        return Graph.from_edges(self.n, local[:, 0], local[:, 1], labels)

    def to_graph(self) -> Graph:
        return self.graph


class PropertyKind(str, Enum):
    DEGREE = "degree"
    CLUSTERING = "clustering"


@dataclass(frozen=True, eq=False)
class PropertyDistribution:
    """Sorted multiset of per-node values with its empirical CDF."""
    values: np.ndarray
    kind: PropertyKind

    def __post_init__(self):
        values = np.sort(np.asarray(self.values, dtype=np.float64).ravel())
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    def cdf(self, x) -> np.ndarray:
        """Right-continuous empirical CDF evaluated at x."""
        return np.searchsorted(self.values, x, side="right") / len(self.values)

    def mean(self) -> float:
        return float(self.values.mean())


@dataclass(frozen=True)
class GraphSummary:
    """Headline summary values for one network."""
    nodes: int
    edges: int
    average_degree: float
    clustering: float
    density: Optional[float]

    def to_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "edges": self.edges,
            "average_degree": self.average_degree,
            "clustering": self.clustering,
            "density": self.density,
        }


GraphLike = Union[Graph, Sample]


# ---------------------------------------------------------------------------
# Loading and writing
# ---------------------------------------------------------------------------

def _open_text(path: Path, mode: str = "rt"):
    if path.suffix == ".gz":
        return gzip.open(path, mode, encoding="utf-8")
    return open(path, mode, encoding="utf-8")


def load_edge_list(path: Union[str, Path], options: Optional[IngestOptions] = None) -> Graph:
    """
    Read a SNAP-style edge list into a simple undirected Graph.

    Labels are mapped to contiguous indices in order of first appearance; the
    mapping is kept in `Graph.labels`. Raises EdgeListParseError on a line that
    is not exactly two tokens and EmptyGraphError when no node is found.
    """
    options = options or IngestOptions()
    path = Path(path)
    index: dict[str, int] = {}
    sources: list[int] = []
    targets: list[int] = []
    lines = comments = 0

    with _open_text(path) as fh:
        for line_number, line in enumerate(fh, start=1):
            lines += 1
            stripped = line.strip()
            if not stripped:
                continue
            if stripped.startswith(options.comment_prefix):
                comments += 1
                continue
            tokens = stripped.split(options.delimiter)
            if len(tokens) != 2:
                raise EdgeListParseError(str(path), line_number, line)
            a, b = tokens
            sources.append(index.setdefault(a, len(index)))
            targets.append(index.setdefault(b, len(index)))

    if not index:
        raise EmptyGraphError(f"{path}: edge list contains no nodes")

    return Graph.from_edges(
        len(index), sources, targets, index.keys(), lines=lines, comments=comments
    )


def write_edge_list(g: GraphLike, path: Union[str, Path]) -> Path:
    """
    Write SNAP-style text using original labels.

    Isolated nodes are written as a self-loop line: the loader keeps the node
    and drops the loop, so n survives a round trip.
    """
    graph = _as_graph(g)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    labels = graph.labels
    with _open_text(path, "wt") as fh:
        fh.write(f"# Undirected graph: {path.name}\n")
        fh.write(f"# Nodes: {graph.n} Edges: {graph.m}\n")
        fh.write("# FromNodeId\tToNodeId\n")
        for a, b in graph.edges.tolist():
            fh.write(f"{labels[a]}\t{labels[b]}\n")
        for u in np.flatnonzero(graph.degrees == 0).tolist():
            fh.write(f"{labels[u]}\t{labels[u]}\n")
    return path


# ---------------------------------------------------------------------------
# Subgraphs
# ---------------------------------------------------------------------------

def induced_subgraph(g: Graph, nodes: Iterable[int]) -> Sample:
    """Sample holding `nodes` and every edge of g with both endpoints in it."""
    nodes = np.unique(np.fromiter(nodes, dtype=np.int64) if not isinstance(nodes, np.ndarray)
                      else nodes.astype(np.int64))
    if nodes.size and (nodes[0] < 0 or nodes[-1] >= g.n):
        raise NetSamplerError(f"node index out of range [0, {g.n})")
    return Sample(parent=g, nodes=nodes, edges=induced_edges(g, nodes))


def induced_edges(g: Graph, nodes: np.ndarray) -> np.ndarray:
    """All (lo, hi) edges of g whose endpoints both lie in the sorted array `nodes`."""
    mask = np.zeros(g.n, dtype=bool)
    mask[nodes] = True
    rows, cols = g.gather_neighbors(nodes)
    keep = (rows < cols) & mask[cols]
    return np.column_stack([rows[keep], cols[keep]])


# ---------------------------------------------------------------------------
# Properties
# ---------------------------------------------------------------------------

def _as_graph(g: GraphLike) -> Graph:
    return g.to_graph() if isinstance(g, Sample) else g


def _require_nodes(graph: Graph) -> None:
    if graph.n == 0:
        raise EmptyGraphError("property of an empty graph is undefined")


def degree_distribution(g: GraphLike) -> PropertyDistribution:
    graph = _as_graph(g)
    _require_nodes(graph)
    return PropertyDistribution(graph.degrees, PropertyKind.DEGREE)


def triangles(graph: Graph) -> np.ndarray:
    """Per-node count of links among its neighbours."""
    adj = graph.adjacency
    counts = np.zeros(graph.n, dtype=np.float64)
    for start in range(0, graph.n, _TRIANGLE_BLOCK):
        block = adj[start:start + _TRIANGLE_BLOCK]
        counts[start:start + block.shape[0]] = np.asarray(
            (block @ adj).multiply(block).sum(axis=1)
        ).ravel()
    return np.rint(counts / 2).astype(np.int64)


def clustering_distribution(g: GraphLike) -> PropertyDistribution:
    """Local clustering per node; nodes with degree < 2 contribute 0."""
    graph = _as_graph(g)
    _require_nodes(graph)
    deg = graph.degrees.astype(np.float64)
    pairs = deg * (deg - 1) / 2
    links = triangles(graph)
    values = np.divide(links, pairs, out=np.zeros(graph.n), where=pairs > 0)
    return PropertyDistribution(values, PropertyKind.CLUSTERING)


def average_degree(g: GraphLike) -> float:
    graph = _as_graph(g)
    _require_nodes(graph)
    return 2.0 * graph.m / graph.n


def density(g: GraphLike) -> float:
    graph = _as_graph(g)
    if graph.n < 2:
        raise NetSamplerError(f"density is undefined for n < 2 (n={graph.n})")
    return 2.0 * graph.m / (graph.n * (graph.n - 1))


def average_clustering(g: GraphLike) -> float:
    return clustering_distribution(g).mean()


def summarize(g: GraphLike) -> GraphSummary:
    graph = _as_graph(g)
    return GraphSummary(
        nodes=graph.n,
        edges=graph.m,
        average_degree=average_degree(graph),
        clustering=average_clustering(graph),
        density=density(graph) if graph.n >= 2 else None,
    )
