"""
Per-technique timing ledger.

Logs one row per (network, technique) batch of sampler runs to a SQLite file
(default netsampler/data/ledger.db, override with NETSAMPLER_LEDGER_PATH; the
value "off" disables it). GET /metrics and `netsampler metrics` read the
aggregated view.
"""

import sqlite3
import time
from pathlib import Path
from typing import Optional, Union

from .defaults import get_default
from .journal import Stage, journal

DISABLED = "off"


def resolve_path(path: Optional[Union[str, Path]] = None) -> Optional[Path]:
    value = str(path) if path is not None else get_default("ledger_path")
    if value.lower() == DISABLED:
        return None
    return Path(value)


def _conn(db_path: Path) -> sqlite3.Connection:
    db_path.parent.mkdir(parents=True, exist_ok=True)
    conn = sqlite3.connect(str(db_path))
    conn.execute(
        """
        CREATE TABLE IF NOT EXISTS batches (
            id          INTEGER PRIMARY KEY AUTOINCREMENT,
            ts          REAL    NOT NULL,
            network     TEXT    NOT NULL,
            technique   TEXT    NOT NULL,
            runs        INTEGER NOT NULL,
            mean_nodes  REAL    NOT NULL DEFAULT 0.0,
            mean_edges  REAL    NOT NULL DEFAULT 0.0,
            seconds     REAL    NOT NULL DEFAULT 0.0
        )
        """
    )
    conn.commit()
    return conn


def log_batch(
    network: str,
    technique: str,
    runs: int,
    mean_nodes: float,
    mean_edges: float,
    seconds: float,
    path: Optional[Union[str, Path]] = None,
) -> None:
    """Insert one batch row. Called by the harness after each technique finishes."""
    db_path = resolve_path(path)
    if db_path is None:
        return
    try:
        conn = _conn(db_path)
        conn.execute(
            "INSERT INTO batches (ts, network, technique, runs, mean_nodes, mean_edges, seconds) "
            "VALUES (?,?,?,?,?,?,?)",
            (time.time(), network, str(technique), runs, mean_nodes, mean_edges, seconds),
        )
        conn.commit()
        conn.close()
    except Exception as exc:
        # Never let the ledger break a run
        journal.warning(Stage.HARNESS, f"ledger write failed: {exc}")


def get_metrics(path: Optional[Union[str, Path]] = None) -> dict:
    """
    Return aggregated timings for all techniques.

    Shape:
        {
            "total_seconds": float,
            "total_runs": int,
            "by_technique": {
                "<technique>": {
                    "batches": int,
                    "runs": int,
                    "seconds": float,
                    "seconds_per_run": float,
                    "mean_nodes": float,
                    "mean_edges": float,
                }
            }
        }
    """
    db_path = resolve_path(path)
    if db_path is None or not db_path.exists():
        return {"total_seconds": 0.0, "total_runs": 0, "by_technique": {}}

    try:
        conn = _conn(db_path)
        rows = conn.execute(
            """
            SELECT technique, COUNT(*) AS batches, SUM(runs) AS runs,
                   SUM(seconds) AS seconds,
                   SUM(mean_nodes * runs) AS node_sum, SUM(mean_edges * runs) AS edge_sum
            FROM batches
            GROUP BY technique
            ORDER BY technique
            """
        ).fetchall()
        conn.close()

        by_technique: dict = {}
        total_seconds = 0.0
        total_runs = 0
        for technique, batches, runs, seconds, node_sum, edge_sum in rows:
            runs = runs or 0
            seconds = seconds or 0.0
            by_technique[technique] = {
                "batches": batches,
                "runs": runs,
                "seconds": round(seconds, 6),
                "seconds_per_run": round(seconds / runs, 6) if runs else 0.0,
                "mean_nodes": (node_sum or 0.0) / runs if runs else 0.0,
                "mean_edges": (edge_sum or 0.0) / runs if runs else 0.0,
            }
            total_seconds += seconds
            total_runs += runs

        return {
            "total_seconds": round(total_seconds, 6),
            "total_runs": total_runs,
            "by_technique": by_technique,
        }
    except Exception as exc:
        return {"error": str(exc)}
