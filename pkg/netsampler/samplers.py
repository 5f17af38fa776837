"""
Samplers — eight techniques with an optional, fractional induction step.

Random selection:
  RNS  nodes uniformly at random, plus their mutual links
  RND  nodes proportionally to degree, plus their mutual links
  RLS  links uniformly at random
  RLI  links uniformly at random, plus links among their endpoints
Network exploration:
  RWS  random walk with fly-back to the seed node
  RWI  random walk, plus links among visited nodes
  FFS  forest-fire burning (partial BFS, geometric burn counts)
  FFI  forest-fire burning, plus links among burned nodes

Every sampler is a pure function of (Graph, SamplerSpec). The RNG is PCG64
seeded from `spec.seed`. Partial induction (alpha < 1) keeps each candidate
link by a uniform variate hashed from (seed, link), so it never consumes the
shared stream: a technique and its induced twin see identical draws, and
raising alpha only ever adds links.
"""

import math
from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .defaults import get_float, get_int
from .errors import ConfigError, SamplingError
from .graph import Graph, Sample, induced_edges

_UINT64_MAX = 2**64 - 1


class Technique(str, Enum):
    RNS = "RNS"
    RND = "RND"
    RLS = "RLS"
    RLI = "RLI"
    RWS = "RWS"
    RWI = "RWI"
    FFS = "FFS"
    FFI = "FFI"

    @property
    def induced(self) -> bool:
        return self in _INDUCED

    @property
    def exploration(self) -> bool:
        return self in _EXPLORATION

    @property
    def base(self) -> "Technique":
        """The non-induced twin (RLI → RLS); node selection maps to itself."""
        return _BASE.get(self, self)


_INDUCED = frozenset({Technique.RNS, Technique.RND, Technique.RLI, Technique.RWI, Technique.FFI})
_EXPLORATION = frozenset({Technique.RWS, Technique.RWI, Technique.FFS, Technique.FFI})
_BASE = {Technique.RLI: Technique.RLS, Technique.RWI: Technique.RWS, Technique.FFI: Technique.FFS}

ALL_TECHNIQUES: tuple[Technique, ...] = tuple(Technique)


@dataclass(frozen=True)
class SamplerSpec:
    """Everything a sampler needs besides the graph."""
    technique: Technique
    target_fraction: float = field(default_factory=lambda: get_float("fraction"))
    seed: int = 0
    forward_burning_p: float = field(default_factory=lambda: get_float("forward_burning_p"))
    flyback_c: float = field(default_factory=lambda: get_float("flyback_c"))
    induction_fraction: float = field(default_factory=lambda: get_float("induction_fraction"))
    stall_factor: int = field(default_factory=lambda: get_int("stall_factor"))

    def __post_init__(self):
        try:
            object.__setattr__(self, "technique", Technique(self.technique))
        except ValueError:
            raise ConfigError(
                f"unknown technique {self.technique!r}; valid: {[t.value for t in Technique]}",
                key="technique",
            ) from None
        if not 0.0 < self.target_fraction < 1.0:
            raise ConfigError("must lie in (0, 1)", key="target_fraction")
        if not 0.0 < self.forward_burning_p < 1.0:
            raise ConfigError("must lie in (0, 1)", key="forward_burning_p")
        if not 0.0 <= self.flyback_c < 1.0:
            raise ConfigError("must lie in [0, 1)", key="flyback_c")
        if not 0.0 < self.induction_fraction <= 1.0:
            raise ConfigError("must lie in (0, 1]", key="induction_fraction")
        if not 0 <= self.seed <= _UINT64_MAX:
            raise ConfigError("must be an unsigned 64-bit integer", key="seed")
        if self.stall_factor < 1:
            raise ConfigError("must be at least 1", key="stall_factor")


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def sample(g: Graph, spec: SamplerSpec) -> Sample:
    """Draw one sample of g with the technique named in spec."""
    return _DISPATCH[spec.technique](g, spec)


def target_size(n: int, fraction: float) -> int:
    """ceil(fraction * n), immune to float noise such as 0.15 * 100."""
    return math.ceil(round(fraction * n, 9))


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def rns(g: Graph, spec: SamplerSpec) -> Sample:
    spec = _as(spec, Technique.RNS)
    k = _target(g, spec)
    rng = make_rng(spec.seed)
    nodes = rng.choice(g.n, size=k, replace=False)
    return _finish(g, spec, nodes, _NO_EDGES)


def rnd(g: Graph, spec: SamplerSpec) -> Sample:
    spec = _as(spec, Technique.RND)
    k = _target(g, spec)
    rng = make_rng(spec.seed)
    nodes, fallback = weighted_without_replacement(g.degrees, k, rng)
    return _finish(g, spec, nodes, _NO_EDGES, ("uniform-fallback",) if fallback else ())


def rls(g: Graph, spec: SamplerSpec) -> Sample:
    return _links(g, _as(spec, Technique.RLS))


def rli(g: Graph, spec: SamplerSpec) -> Sample:
    return _links(g, _as(spec, Technique.RLI))


def rws(g: Graph, spec: SamplerSpec) -> Sample:
    return _walk(g, _as(spec, Technique.RWS))


def rwi(g: Graph, spec: SamplerSpec) -> Sample:
    return _walk(g, _as(spec, Technique.RWI))


def ffs(g: Graph, spec: SamplerSpec) -> Sample:
    return _fire(g, _as(spec, Technique.FFS))


def ffi(g: Graph, spec: SamplerSpec) -> Sample:
    return _fire(g, _as(spec, Technique.FFI))


def _links(g: Graph, spec: SamplerSpec) -> Sample:
    k = _target(g, spec)
    nodes, edges = _link_selection(g, k, make_rng(spec.seed))
    return _finish(g, spec, nodes, edges)


def _walk(g: Graph, spec: SamplerSpec) -> Sample:
    k = _target(g, spec)
    nodes, edges, restarts = _random_walk(g, spec, k, make_rng(spec.seed))
    notes = (f"walk-restarts={restarts}",) if restarts else ()
    return _finish(g, spec, nodes, edges, notes)


def _fire(g: Graph, spec: SamplerSpec) -> Sample:
    k = _target(g, spec)
    nodes, edges, restarts = _forest_fire(g, spec, k, make_rng(spec.seed))
    notes = (f"fire-restarts={restarts}",) if restarts else ()
    return _finish(g, spec, nodes, edges, notes)


def burn_counts(rng: np.random.Generator, p: float, size: Optional[int] = None):
    """Geometric draws on {0, 1, 2, ...} with mean p / (1 - p)."""
    return rng.geometric(1.0 - p, size=size) - 1


def weighted_without_replacement(
    weights: np.ndarray, k: int, rng: np.random.Generator
) -> tuple[np.ndarray, bool]:
    """
    Pick k distinct indices, each draw proportional to its fixed weight.

    Uses exponentiated keys u ** (1 / w): the k largest keys have the same
    law as k sequential weighted draws with renormalisation. When fewer than k
    weights are positive, the remainder is filled uniformly from zero-weight
    indices and the fallback flag is set. Returns indices in draw order.
    """
    weights = np.asarray(weights, dtype=np.float64)
    keys = np.full(weights.shape, -np.inf)
    positive = weights > 0
    u = rng.random(weights.size)
    keys[positive] = np.log(u[positive]) / weights[positive]
    order = np.argsort(-keys, kind="stable")
    n_positive = int(positive.sum())
    if n_positive >= k:
        return order[:k], False
    zero = np.flatnonzero(~positive)
    filler = rng.choice(zero, size=k - n_positive, replace=False)
    return np.concatenate([order[:n_positive], filler]), True


def edge_uniforms(seed: int, pairs: np.ndarray) -> np.ndarray:
    """Uniform [0, 1) variate per (lo, hi) pair, fixed by (seed, pair) alone."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    lo = pairs[:, 0].astype(np.uint64)
    hi = pairs[:, 1].astype(np.uint64)
    h = _splitmix64(_splitmix64(np.uint64(seed) ^ lo) ^ hi)
    return (h >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def induce(g: Graph, nodes: np.ndarray, edges: np.ndarray, seed: int, alpha: float) -> np.ndarray:
    """Selected links plus each other link among `nodes` kept with probability alpha."""
    candidates = induced_edges(g, np.unique(nodes))
    if alpha >= 1.0:
        return candidates
    keep = edge_uniforms(seed, candidates) < alpha
    return np.vstack([np.asarray(edges, dtype=np.int64).reshape(-1, 2), candidates[keep]])


# ---------------------------------------------------------------------------
# Internal helpers
# ---------------------------------------------------------------------------

_NO_EDGES = np.zeros((0, 2), dtype=np.int64)

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _splitmix64(x: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = np.asarray(x, dtype=np.uint64) + _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))


def _as(spec: SamplerSpec, technique: Technique) -> SamplerSpec:
    return spec if spec.technique is technique else replace(spec, technique=technique)


def _target(g: Graph, spec: SamplerSpec) -> int:
    k = target_size(g.n, spec.target_fraction)
    if k < 2:
        raise SamplingError(
            f"target of {k} node(s) is too small: fraction {spec.target_fraction} of n={g.n}"
        )
    if k > g.n:
        raise SamplingError(f"target of {k} nodes exceeds graph size {g.n}")
    return k


def _finish(
    g: Graph,
    spec: SamplerSpec,
    nodes: np.ndarray,
    edges: np.ndarray,
    notes: tuple[str, ...] = (),
) -> Sample:
    technique = spec.technique
    alpha = None
    if technique.induced:
        alpha = spec.induction_fraction
        edges = induce(g, nodes, edges, spec.seed, alpha)
    return Sample(
        parent=g,
        nodes=nodes,
        edges=edges,
        technique=technique,
        seed=spec.seed,
        induction_fraction=alpha,
        notes=notes,
    )


def _link_selection(g: Graph, k: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Draw links in random order until their endpoints first cover k nodes."""
    reachable = int((g.degrees > 0).sum())
    if reachable < k:
        raise SamplingError(
            f"only {reachable} nodes have links; link selection cannot reach {k} nodes"
        )
    drawn = g.edges[rng.permutation(g.m)]
    _, first_seen = np.unique(drawn.ravel(), return_index=True)
    first_seen.sort()
    last = first_seen[k - 1] // 2
    chosen = drawn[:last + 1]
    return np.unique(chosen), chosen


_WALK_BATCH = 1024
_WALK_BATCH_MAX = 1 << 18


def _random_walk(
    g: Graph, spec: SamplerSpec, k: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray, int]:
    """
    Walk from a uniform seed, flying back to it with probability c.

    If the node count has not grown for stall_factor * k steps (or the seed is
    an isolated node) the walk restarts from a fresh uniform seed, keeping
    everything gathered so far. Steps are generated in growing batches and
    scanned with array operations for the node target and the stall window.
    """
    degrees = g.degrees
    window = spec.stall_factor * k
    seen = np.zeros(g.n, dtype=bool)
    count = 0
    blocks: list[np.ndarray] = []
    restarts = -1
    idle = window
    seed_node = current = 0
    batch = _WALK_BATCH

    while count < k:
        if idle >= window or degrees[current] == 0:
            seed_node = current = int(rng.integers(g.n))
            restarts += 1
            idle = 0
            if not seen[seed_node]:
                seen[seed_node] = True
                count += 1
            continue

        nodes, prev = _walk_batch(g, current, seed_node, spec.flyback_c, batch, rng)
        batch = min(2 * batch, _WALK_BATCH_MAX)

        positions = np.arange(nodes.size)
        first = np.zeros(nodes.size, dtype=bool)
        first[np.unique(nodes, return_index=True)[1]] = True
        new = first & ~seen[nodes]
        last_new = np.maximum.accumulate(np.where(new, positions, -1))
        idle_after = np.where(last_new >= 0, positions - last_new, idle + positions + 1)

        stop = nodes.size
        reached = np.flatnonzero(count + np.cumsum(new) >= k)
        if reached.size:
            stop = int(reached[0]) + 1
        stalled = np.flatnonzero(idle_after[:stop] >= window)
        if stalled.size:
            stop = int(stalled[0]) + 1

        nodes, prev, new = nodes[:stop], prev[:stop], new[:stop]
        moved = prev >= 0
        a, b = prev[moved], nodes[moved]
        blocks.append(np.column_stack([np.minimum(a, b), np.maximum(a, b)]))
        seen[nodes[new]] = True
        count += int(new.sum())
        idle = int(idle_after[stop - 1])
        current = int(nodes[-1])

    edges = np.unique(np.vstack(blocks), axis=0) if blocks else _NO_EDGES
    return np.flatnonzero(seen), edges.astype(np.int64).reshape(-1, 2), restarts


def _walk_batch(
    g: Graph, start: int, seed_node: int, c: float, size: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """
    `size` steps from `start`: node after each step, and the node it came
    from (-1 for a fly-back to the seed).

    The moves between two fly-backs form an excursion from the seed (the first
    one from `start`). Excursions are independent, so they advance together,
    one depth level per array operation.
    """
    fly = rng.random(size) < c if c else np.zeros(size, dtype=bool)
    u = rng.random(size)
    nodes = np.full(size, seed_node, dtype=np.int64)
    prev = np.full(size, -1, dtype=np.int64)
    if not c:
        _walk_path(g, start, u, nodes, prev)
        return nodes, prev

    positions = np.arange(size)
    excursion = np.cumsum(fly)
    depth = positions - np.maximum.accumulate(np.where(fly, positions, -1)) - 1
    moves = np.flatnonzero(~fly)
    if not moves.size:
        return nodes, prev

    order = moves[np.argsort(depth[moves], kind="stable")]
    levels = np.split(order, np.flatnonzero(np.diff(depth[order])) + 1)
    where = np.full(int(excursion[-1]) + 1, seed_node, dtype=np.int64)
    where[0] = start
    for level in levels:
        ex = excursion[level]
        here = where[ex]
        nxt = _step(g, here, u[level])
        prev[level] = here
        nodes[level] = nxt
        where[ex] = nxt
    return nodes, prev


def _walk_path(g: Graph, start: int, u: np.ndarray, nodes: np.ndarray, prev: np.ndarray) -> None:
    """A walk that never flies back is a single path; take it step by step."""
    indptr = g.indptr.tolist()
    indices = g.indices
    here = start
    for i, x in enumerate(u.tolist()):
        lo, hi = indptr[here], indptr[here + 1]
        nxt = int(indices[lo + min(int(x * (hi - lo)), hi - lo - 1)])
        prev[i] = here
        nodes[i] = nxt
        here = nxt


def _step(g: Graph, here: np.ndarray, u: np.ndarray) -> np.ndarray:
    """One uniform-neighbour move for every walker in `here`."""
    lo = g.indptr[here]
    deg = g.indptr[here + 1] - lo
    offset = np.minimum((u * deg).astype(np.int64), deg - 1)
    return g.indices[lo + offset]


def _forest_fire(
    g: Graph, spec: SamplerSpec, k: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray, int]:
    """
    Partial BFS from a uniform seed. Each burning node ignites a geometric
    number of its unburned neighbours. When the fire dies out it restarts from
    a fresh unburned node; burned nodes never burn again.
    """
    burned = np.zeros(g.n, dtype=bool)
    count = 0
    edges: list[tuple[int, int]] = []
    queue: deque[int] = deque()
    restarts = -1

    while count < k:
        if not queue:
            unburned = np.flatnonzero(~burned)
            ignition = int(unburned[rng.integers(unburned.size)])
            burned[ignition] = True
            count += 1
            queue.append(ignition)
            restarts += 1
            continue

        u = queue.popleft()
        burn = int(burn_counts(rng, spec.forward_burning_p))
        if burn == 0:
            continue
        nbrs = g.neighbors(u)
        fresh = nbrs[~burned[nbrs]]
        if not fresh.size:
            continue
        for v in rng.choice(fresh, size=min(burn, fresh.size), replace=False).tolist():
            burned[v] = True
            count += 1
            edges.append((u, v) if u < v else (v, u))
            queue.append(v)
            if count >= k:
                break

    return np.flatnonzero(burned), np.array(edges, dtype=np.int64).reshape(-1, 2), restarts


_DISPATCH: dict[Technique, Callable[[Graph, SamplerSpec], Sample]] = {
    Technique.RNS: rns,
    Technique.RND: rnd,
    Technique.RLS: rls,
    Technique.RLI: rli,
    Technique.RWS: rws,
    Technique.RWI: rwi,
    Technique.FFS: ffs,
    Technique.FFI: ffi,
}
