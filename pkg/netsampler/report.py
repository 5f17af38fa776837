"""
Report emission.

Files written into the output directory for one experiment:

    report.csv              network,technique,property,mean,std,residual,significant
                            (+ value in pooled mode)
    report.json             same rows with full per-run lists
    residuals_<prop>.csv    technique × network residual table
    summary.csv             cross-network mean/std of residuals per technique
    plot_<prop>.json        per-technique series + ±t_critical band
    induction_sweep.csv     only when the sweep ran (and .json)
    experiment.json         config, original network values, errors, sampler notes

Everything is deterministic for a fixed config: no timestamps, JSON keys are
sorted, floats are written with repr precision.
"""

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable, Optional, Union

from .config import Aggregation, ReportFormat
from .errors import NetSamplerError
from .harness import ReportBundle, ReportRow, SweepRow
from .journal import Stage, journal
from .stats import ResidualMatrix

CSV_HEADER = ["network", "technique", "property", "mean", "std", "residual", "significant"]
SWEEP_HEADER = ["network", "technique", "alpha", "property", "mean", "std"]


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def emit_report(
    rows: list[ReportRow],
    fmt: Union[str, ReportFormat],
    output_dir: Union[str, Path],
    stem: str = "report",
    include_value: bool = False,
) -> Path:
    """
    Write rows as <stem>.csv or <stem>.json and return the path.

    With include_value the CSV gains a trailing `value` column: the aggregate
    the residual was computed from, which differs from `mean` in pooled mode.
    """
    if not rows:
        raise NetSamplerError("cannot emit an empty report")
    fmt = ReportFormat(fmt)
    if fmt == ReportFormat.CSV:
        table = [
            [r.network, r.technique, r.property, _num(r.mean), _num(r.std),
             _num(r.residual), "true" if r.significant else "false"]
            + ([_num(r.value)] if include_value else [])
            for r in rows
        ]
        header = CSV_HEADER + ["value"] if include_value else CSV_HEADER
        return _write(Path(output_dir) / f"{stem}.csv", _csv_text(header, table))
    return _write(Path(output_dir) / f"{stem}.json", _json_text({"rows": [r.to_dict() for r in rows]}))


def load_report_json(path: Union[str, Path]) -> list[ReportRow]:
    data = json.loads(Path(path).read_text())
    return [ReportRow.from_dict(row) for row in data["rows"]]


def plot_data(prop: str, matrix: ResidualMatrix, bundle: ReportBundle) -> dict:
    """
    Series needed to redraw a residual panel.

    Shape:
        {
            "property": str,
            "mode": "peer-mean" | "true-value",
            "networks": [str],
            "band": {"lower": -t, "upper": t},
            "series": {"<technique>": [residual per network]},
            "reference": [residual of the original per network],
            "summary": {"<technique>": {"mean": float, "std": float}},
        }
    """
    critical = matrix.critical_value
    references = bundle.references.get(prop, {})
    return {
        "property": prop,
        "mode": matrix.mode.value,
        "networks": list(matrix.networks),
        "band": {"lower": -critical, "upper": critical},
        "series": {
            technique: [_jsonable(v) for v in row]
            for technique, row in zip(matrix.techniques, matrix.residuals.tolist())
        },
        "reference": [_jsonable(references.get(net, math.nan)) for net in matrix.networks],
        "summary": {
            technique: {k: _jsonable(v) for k, v in stats.items()}
            for technique, stats in bundle.summaries.get(prop, {}).items()
        },
    }


def write_bundle(
    bundle: ReportBundle, output_dir: Optional[Union[str, Path]] = None
) -> list[Path]:
    """Write every report file for a finished experiment."""
    out = Path(output_dir) if output_dir is not None else bundle.config.output_dir
    written: list[Path] = []

    if bundle.rows:
        pooled = bundle.config.aggregation == Aggregation.POOLED
        for fmt in bundle.config.formats:
            written.append(emit_report(bundle.rows, fmt, out, include_value=pooled))

    for prop, matrix in bundle.residuals.items():
        written.append(_write(out / f"residuals_{prop}.csv", _residual_table(matrix)))
        written.append(_write(out / f"plot_{prop}.json", _json_text(plot_data(prop, matrix, bundle))))
    if bundle.summaries:
        written.append(_write(out / "summary.csv", _summary_table(bundle)))

    if bundle.sweep:
        written.extend(_write_sweep(bundle.sweep, bundle.config.formats, out))

    written.append(_write(out / "experiment.json", _json_text(_experiment_info(bundle))))
    journal.result(Stage.REPORT, f"📝 Wrote {len(written)} report file(s) to {out}")
    return written


# ---------------------------------------------------------------------------
# Internal helpers
# ---------------------------------------------------------------------------

def _write(path: Path, text: str) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise NetSamplerError(f"cannot write report file {path}: {exc}") from exc
    return path


def _csv_text(header: list[str], rows: Iterable[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _num(value: float) -> str:
    return repr(float(value))


def _jsonable(value: float):
    value = float(value)
    if math.isfinite(value):
        return value
    if math.isnan(value):
        return "nan"
    return "inf" if value > 0 else "-inf"


def _residual_table(matrix: ResidualMatrix) -> str:
    rows = [
        [technique] + [_num(v) for v in row]
        for technique, row in zip(matrix.techniques, matrix.residuals.tolist())
    ]
    return _csv_text(["technique"] + list(matrix.networks), rows)


def _summary_table(bundle: ReportBundle) -> str:
    rows = []
    for prop, summary in bundle.summaries.items():
        for technique, stats in summary.items():
            rows.append([prop, technique, _num(stats["mean"]), _num(stats["std"])])
    return _csv_text(["property", "technique", "mean_residual", "std_residual"], rows)


def _write_sweep(sweep: list[SweepRow], formats: list[ReportFormat], out: Path) -> list[Path]:
    written = []
    if ReportFormat.CSV in formats:
        table = [
            [s.network, s.technique, _num(s.alpha), s.property, _num(s.mean), _num(s.std)]
            for s in sweep
        ]
        written.append(_write(out / "induction_sweep.csv", _csv_text(SWEEP_HEADER, table)))
    if ReportFormat.JSON in formats:
        written.append(
            _write(out / "induction_sweep.json", _json_text({"rows": [s.to_dict() for s in sweep]}))
        )
    return written


def _experiment_info(bundle: ReportBundle) -> dict:
    return {
        "config": bundle.config.model_dump(mode="json"),
        "originals": bundle.originals,
        "errors": bundle.errors,
        "notes": bundle.notes,
        "residuals": {prop: m.to_dict() for prop, m in bundle.residuals.items()},
    }
