"""
Dataset registry for the reference networks.

Ground-truth sizes and published summary values (average degree,
clustering coefficient, density) for the public networks the experiments are
usually run on, read from netsampler/data/datasets.json. The data files
themselves are user-supplied; the registry only names them, points at their
public download page and carries expected counts for integrity checks.

Exports:
    get_dataset_record(name)  — look up a network by name
    list_datasets()           — all registry names
    compare_summary(name, s)  — relative deviations of a loaded graph from the registry
"""

import json
from functools import lru_cache
from pathlib import Path
from typing import Optional

from .graph import GraphSummary

INDEX_PATH = Path(__file__).parent / "data" / "datasets.json"


# ---------------------------------------------------------------------------
# Index loading
# ---------------------------------------------------------------------------

@lru_cache(maxsize=1)
def _load_index() -> dict:
    """Load the registry from disk; return empty dict if it is missing."""
    if not INDEX_PATH.exists():
        return {}
    return json.loads(INDEX_PATH.read_text())


def _normalise_name(name: str) -> str:
    return name.strip().lower()


def _find_record(name: str) -> Optional[dict]:
    """
    Look up a registry record, trying several normalisation variants.

    Handles:
      - Exact match              ca-hep
      - Case-insensitive match   CA-HEP
      - Separator variants       ca_hep, ca.hep
    """
    index = _load_index()
    if not index:
        return None

    if name in index:
        return index[name]

    lower = _normalise_name(name)
    for key, rec in index.items():
        if key.lower() == lower:
            return rec

    folded = lower.replace("_", "-").replace(".", "-")
    for key, rec in index.items():
        if key.lower().replace("_", "-").replace(".", "-") == folded:
            return rec

    return None


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def get_dataset_record(name: str) -> dict:
    """
    Return registry information for a network.

    Returns:
        {
            "name": str,
            "description": str,
            "expected_n": int,
            "expected_m": int,
            "average_degree": float,
            "clustering": float,
            "density": float,
            "url": str | None,
        }

    Raises:
        ValueError if the name is not in the registry.
    """
    record = _find_record(name)
    if record is None:
        raise ValueError(
            f"Dataset {name!r} not found in the registry. "
            f"Known datasets: {list_datasets()}"
        )
    return dict(record)


def find_dataset_record(name: str) -> Optional[dict]:
    record = _find_record(name)
    return dict(record) if record is not None else None


def list_datasets() -> list[str]:
    return sorted(_load_index())


def compare_summary(name: str, summary: GraphSummary) -> dict:
    """
    Compare a loaded graph against its registry row.

    Node and edge counts must match exactly; average degree and density are
    reported as relative deviations from the registry values.
    """
    record = get_dataset_record(name)

    def _rel(observed: Optional[float], expected: Optional[float]) -> Optional[float]:
        if observed is None or not expected:
            return None
        return abs(observed - expected) / abs(expected)

    return {
        "name": record["name"],
        "nodes_match": summary.nodes == record["expected_n"],
        "edges_match": summary.edges == record["expected_m"],
        "average_degree_rel_error": _rel(summary.average_degree, record.get("average_degree")),
        "density_rel_error": _rel(summary.density, record.get("density")),
        "clustering_abs_error": (
            abs(summary.clustering - record["clustering"])
            if record.get("clustering") is not None else None
        ),
        "expected": record,
        "observed": summary.to_dict(),
    }
