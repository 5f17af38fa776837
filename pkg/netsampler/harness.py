"""
Experiment harness — datasets × techniques × seeded runs × properties.

Pipeline:
  Validator → load + integrity check → original properties →
  worker pool over (technique, run) → per-run statistics → aggregation →
  residuals per property → report bundle → report files

Per-run statistics are the KS D between sample and original for the two
distributions, and the raw sample value for average degree and density.
Distribution properties are ranked with peer-mean residuals, scalar ones with
true-value residuals against the original network.
"""

import hashlib
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import ledger
from .config import Aggregation, PropertyName, RunConfig
from .errors import DatasetIntegrityError, NetSamplerError
from .graph import (
    Graph,
    PropertyDistribution,
    PropertyKind,
    Sample,
    average_degree,
    clustering_distribution,
    degree_distribution,
    density,
    load_edge_list,
)
from .journal import Stage, journal
from .samplers import Technique, sample
from .stats import (
    PropertyMatrix,
    ResidualMatrix,
    ks_distance,
    reference_residual,
    studentized_residuals,
    studentized_residuals_true,
    summarize_residuals,
)
from .validator import config_validator

_SEED_TAG = "netsampler-run"


@dataclass
class ReportRow:
    """One (network, technique, property) cell with its per-run statistics."""
    network: str
    technique: str
    property: str
    runs: list[float]
    mean: float
    std: float
    value: float
    residual: float = float("nan")
    significant: bool = False
    residual_mode: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "network": self.network,
            "technique": self.technique,
            "property": self.property,
            "runs": list(self.runs),
            "mean": self.mean,
            "std": self.std,
            "value": self.value,
            "residual": _encode_float(self.residual),
            "significant": self.significant,
            "residual_mode": self.residual_mode,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ReportRow":
        return cls(
            network=data["network"],
            technique=data["technique"],
            property=data["property"],
            runs=[float(v) for v in data["runs"]],
            mean=float(data["mean"]),
            std=float(data["std"]),
            value=float(data["value"]),
            residual=_decode_float(data.get("residual")),
            significant=bool(data.get("significant", False)),
            residual_mode=data.get("residual_mode"),
        )


@dataclass
class SweepRow:
    """Partial-induction sweep result for one α."""
    network: str
    technique: str
    alpha: float
    property: str
    mean: float
    std: float

    def to_dict(self) -> dict:
        return {
            "network": self.network,
            "technique": self.technique,
            "alpha": self.alpha,
            "property": self.property,
            "mean": self.mean,
            "std": self.std,
        }


@dataclass
class ReportBundle:
    config: RunConfig
    rows: list[ReportRow] = field(default_factory=list)
    residuals: dict[str, ResidualMatrix] = field(default_factory=dict)
    summaries: dict[str, dict] = field(default_factory=dict)
    references: dict[str, dict[str, float]] = field(default_factory=dict)
    sweep: list[SweepRow] = field(default_factory=list)
    originals: dict[str, dict] = field(default_factory=dict)
    errors: dict[str, str] = field(default_factory=dict)
    notes: dict[str, dict[str, dict[str, int]]] = field(default_factory=dict)

    @property
    def networks(self) -> list[str]:
        return list(self.originals)

    def rows_for(self, prop: str) -> list[ReportRow]:
        return [r for r in self.rows if r.property == prop]


@dataclass(frozen=True)
class _Originals:
    degree: PropertyDistribution
    clustering: Optional[PropertyDistribution]
    avg_degree: float
    density: float


@dataclass(frozen=True)
class _RunResult:
    stats: dict[str, float]
    nodes: int
    edges: int
    notes: tuple[str, ...]
    pooled: dict[str, np.ndarray]


def derive_seed(master_seed: int, technique: str, network: str, run: int, paired: bool = False) -> int:
    """
    64-bit seed for one (technique, network, run) triple.

    Paired designs drop the technique so every technique sees the same seed
    (and the same random seed node) on a given run.
    """
    parts = [_SEED_TAG, str(master_seed), network, str(run)]
    if not paired:
        parts.append(str(Technique(technique).value))
    digest = hashlib.blake2b("\x1f".join(parts).encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


class ExperimentHarness:
    """Runs the full comparison protocol for a RunConfig."""

    def _stream(self, content: str, **metadata) -> None:
        journal.progress(Stage.HARNESS, content, **metadata)

    def run_experiment(self, config: RunConfig, write: bool = True) -> ReportBundle:
        """
        Execute every (network, technique, run) unit, aggregate and rank.

        Datasets that fail to load or fail their integrity check are skipped
        and recorded in bundle.errors. When `write` is set the report files
        are written to config.output_dir.
        """
        bundle = ReportBundle(config=config)
        check = config_validator.validate(config)
        bundle.errors.update(check["dataset_errors"])

        props = [PropertyName(p) for p in config.properties]
        techniques = [Technique(t) for t in config.techniques]
        values: dict[str, dict[str, dict[str, float]]] = {p.value: {} for p in props}
        truths: dict[str, dict[str, float]] = {p.value: {} for p in props}

        for dataset in config.datasets:
            if dataset.name in bundle.errors:
                continue
            try:
                graph = self._load(dataset.name, dataset.path, dataset.expected_n, dataset.expected_m)
            except (NetSamplerError, OSError) as exc:
                bundle.errors[dataset.name] = str(exc)
                journal.error(Stage.LOADER, f"⚠️ Skipping {dataset.name}: {exc}")
                continue

            try:
                outcome = self._run_dataset(graph, dataset.name, config, props, techniques)
            except NetSamplerError as exc:
                bundle.errors[dataset.name] = str(exc)
                journal.error(Stage.SAMPLER, f"⚠️ Skipping {dataset.name}: {exc}")
                continue

            originals, rows, notes, sweep = outcome
            bundle.originals[dataset.name] = summarize_originals(graph, originals)
            bundle.rows.extend(rows)
            bundle.sweep.extend(sweep)
            if notes:
                bundle.notes[dataset.name] = notes
            for p in props:
                truths[p.value][dataset.name] = _truth(p, originals)
            for row in rows:
                values[row.property].setdefault(row.technique, {})[dataset.name] = row.value

        self._rank(bundle, props, techniques, values, truths, config)

        if write:
            from .report import write_bundle
            write_bundle(bundle)
        journal.result(
            Stage.HARNESS,
            f"✅ Experiment finished: {len(bundle.rows)} rows, {len(bundle.errors)} dataset error(s)",
        )
        return bundle

    # --- stages ---

    def _load(self, name: str, path, expected_n: Optional[int], expected_m: Optional[int]) -> Graph:
        journal.progress(Stage.LOADER, f"📂 Loading {name} from {path}")
        graph = load_edge_list(path)
        if expected_n is not None and graph.n != expected_n:
            raise DatasetIntegrityError(f"{name}: expected {expected_n} nodes, loaded {graph.n}")
        if expected_m is not None and graph.m != expected_m:
            raise DatasetIntegrityError(f"{name}: expected {expected_m} edges, loaded {graph.m}")
        dropped = graph.ingest
        if dropped.self_loops or dropped.duplicates:
            journal.warning(
                Stage.LOADER,
                f"{name}: dropped {dropped.self_loops} self-loop(s) and "
                f"{dropped.duplicates} duplicate edge(s)",
                **dropped.to_dict(),
            )
        journal.progress(Stage.LOADER, f"{name}: n={graph.n}, m={graph.m}")
        return graph

    def _originals(self, graph: Graph, props: list[PropertyName]) -> _Originals:
        return _Originals(
            degree=degree_distribution(graph),
            clustering=(
                clustering_distribution(graph) if PropertyName.CLUSTERING_DIST in props else None
            ),
            avg_degree=average_degree(graph),
            density=density(graph),
        )

    def _run_units(
        self,
        graph: Graph,
        originals: _Originals,
        config: RunConfig,
        props: list[PropertyName],
        technique: Technique,
        network: str,
        alpha: Optional[float] = None,
    ) -> list[_RunResult]:
        pooled = config.aggregation == Aggregation.POOLED

        def unit(run: int) -> _RunResult:
            seed = derive_seed(config.master_seed, technique.value, network, run, config.paired)
            drawn = sample(graph, config.sampler_spec(technique, seed, alpha))
            return measure(drawn, originals, props, keep_values=pooled)

        return _map(unit, range(config.runs), config.workers)

    def _sweep(
        self,
        graph: Graph,
        originals: _Originals,
        config: RunConfig,
        props: list[PropertyName],
        techniques: list[Technique],
        network: str,
    ) -> list[SweepRow]:
        rows: list[SweepRow] = []
        for technique in (t for t in techniques if t.induced):
            for alpha in config.sweep_fractions:
                results = self._run_units(graph, originals, config, props, technique, network, alpha)
                for p in props:
                    stats = [r.stats[p.value] for r in results]
                    mean, std = _mean_std(stats)
                    rows.append(SweepRow(network, technique.value, alpha, p.value, mean, std))
            self._stream(f"🔥 {network} / {technique.value}: induction sweep done")
        return rows

    def _run_dataset(
        self,
        graph: Graph,
        network: str,
        config: RunConfig,
        props: list[PropertyName],
        techniques: list[Technique],
    ) -> tuple[_Originals, list[ReportRow], dict[str, dict[str, int]], list[SweepRow]]:
        """All techniques on one network; nothing is kept if any technique fails."""
        originals = self._originals(graph, props)
        rows: list[ReportRow] = []
        notes: dict[str, dict[str, int]] = {}

        for technique in techniques:
            started = time.perf_counter()
            results = self._run_units(graph, originals, config, props, technique, network)
            elapsed = time.perf_counter() - started

            counts = self._count_notes(network, technique, results)
            if counts:
                notes[technique.value] = counts
            for p in props:
                rows.append(_aggregate(network, technique, p, results, originals, config.aggregation))

            ledger.log_batch(
                network,
                technique.value,
                len(results),
                float(np.mean([r.nodes for r in results])),
                float(np.mean([r.edges for r in results])),
                elapsed,
                path=config.ledger_path,
            )
            self._stream(
                f"🎲 {network} / {technique.value}: {len(results)} runs in {elapsed:.2f}s",
                network=network,
                technique=technique.value,
            )

        sweep: list[SweepRow] = []
        if config.induction_sweep:
            sweep = self._sweep(graph, originals, config, props, techniques, network)
        return originals, rows, notes, sweep

    def _count_notes(self, network: str, technique: Technique, results: list[_RunResult]) -> dict[str, int]:
        """Number of runs carrying each sampler note (restarts, fallbacks)."""
        counts: dict[str, int] = {}
        for result in results:
            for note in result.notes:
                key = note.split("=", 1)[0]
                counts[key] = counts.get(key, 0) + 1
        if counts:
            journal.warning(
                Stage.SAMPLER,
                f"{network} / {technique.value}: {counts}",
                network=network,
                technique=technique.value,
            )
        return counts

    def _rank(
        self,
        bundle: ReportBundle,
        props: list[PropertyName],
        techniques: list[Technique],
        values: dict,
        truths: dict,
        config: RunConfig,
    ) -> None:
        networks = bundle.networks
        if not networks:
            return
        if len(techniques) < 3:
            journal.warning(Stage.STATS, "fewer than 3 techniques: residuals are not computed")
            return

        names = tuple(t.value for t in techniques)
        for p in props:
            matrix = PropertyMatrix(
                values=[[values[p.value][t][net] for net in networks] for t in names],
                techniques=names,
                networks=tuple(networks),
            )
            truth = [truths[p.value][net] for net in networks]
            if p.is_distribution:
                residuals = studentized_residuals(matrix, config.significance)
            else:
                residuals = studentized_residuals_true(matrix, truth, config.significance)
            bundle.residuals[p.value] = residuals
            bundle.summaries[p.value] = summarize_residuals(residuals)
            bundle.references[p.value] = dict(
                zip(networks, reference_residual(matrix, truth).tolist())
            )

            for row in bundle.rows_for(p.value):
                row.residual = residuals.cell(row.technique, row.network)
                row.significant = residuals.is_significant(row.technique, row.network)
                row.residual_mode = residuals.mode.value
            flagged = int(residuals.significant.sum())
            journal.progress(
                Stage.STATS,
                f"📊 {p.value}: {flagged} significant cell(s) at |r| > {residuals.critical_value:.4f}",
            )


# ---------------------------------------------------------------------------
# Per-run measurement and aggregation
# ---------------------------------------------------------------------------

def measure(
    drawn: Sample,
    originals: _Originals,
    props: list[PropertyName],
    keep_values: bool = False,
) -> _RunResult:
    """Per-run statistic for each requested property."""
    stats: dict[str, float] = {}
    pooled: dict[str, np.ndarray] = {}
    for p in props:
        if p == PropertyName.DEGREE_DIST:
            dist = degree_distribution(drawn)
            stats[p.value] = ks_distance(dist, originals.degree)
        elif p == PropertyName.CLUSTERING_DIST:
            dist = clustering_distribution(drawn)
            stats[p.value] = ks_distance(dist, originals.clustering)
        elif p == PropertyName.AVG_DEGREE:
            stats[p.value] = average_degree(drawn)
        else:
            stats[p.value] = density(drawn)
        if keep_values and p.is_distribution:
            pooled[p.value] = dist.values
    return _RunResult(stats=stats, nodes=drawn.n, edges=drawn.m, notes=drawn.notes, pooled=pooled)


def summarize_originals(graph: Graph, originals: _Originals) -> dict:
    info = {
        "nodes": graph.n,
        "edges": graph.m,
        "average_degree": originals.avg_degree,
        "density": originals.density,
    }
    if originals.clustering is not None:
        info["clustering"] = originals.clustering.mean()
    return info


def _truth(p: PropertyName, originals: _Originals) -> float:
    if p == PropertyName.AVG_DEGREE:
        return originals.avg_degree
    if p == PropertyName.DENSITY:
        return originals.density
    return 0.0  # D of the original against itself


def _aggregate(
    network: str,
    technique: Technique,
    p: PropertyName,
    results: list[_RunResult],
    originals: _Originals,
    aggregation: Aggregation,
) -> ReportRow:
    stats = [r.stats[p.value] for r in results]
    mean, std = _mean_std(stats)
    value = mean
    if aggregation == Aggregation.POOLED:
        value = _pooled_value(p, results, originals)
    return ReportRow(
        network=network,
        technique=technique.value,
        property=p.value,
        runs=stats,
        mean=mean,
        std=std,
        value=value,
    )


def _pooled_value(p: PropertyName, results: list[_RunResult], originals: _Originals) -> float:
    """One statistic over all runs pooled together instead of a mean of per-run ones."""
    if p.is_distribution:
        kind = PropertyKind.DEGREE if p == PropertyName.DEGREE_DIST else PropertyKind.CLUSTERING
        reference = originals.degree if kind == PropertyKind.DEGREE else originals.clustering
        merged = PropertyDistribution(np.concatenate([r.pooled[p.value] for r in results]), kind)
        return ks_distance(merged, reference)
    nodes = np.array([r.nodes for r in results], dtype=np.float64)
    edges = np.array([r.edges for r in results], dtype=np.float64)
    if p == PropertyName.AVG_DEGREE:
        return float(2.0 * edges.sum() / nodes.sum())
    return float(2.0 * edges.sum() / (nodes * (nodes - 1)).sum())


def _mean_std(values: list[float]) -> tuple[float, float]:
    arr = np.asarray(values, dtype=np.float64)
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return float(arr.mean()), std


def _map(fn: Callable, items, workers: int) -> list:
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _encode_float(value: float):
    if np.isfinite(value):
        return value
    if np.isnan(value):
        return "nan"
    return "inf" if value > 0 else "-inf"


def _decode_float(value) -> float:
    if value is None:
        return float("nan")
    return float(value)


# Singleton
harness = ExperimentHarness()


def run_experiment(config: RunConfig, write: bool = True) -> ReportBundle:
    return harness.run_experiment(config, write=write)
