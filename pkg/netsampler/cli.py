"""
Command-line entry point.

    netsampler run --config experiment.cfg [--paired] [--workers 4] [--output results/]
    netsampler sample --input g.txt --technique FFI --fraction 0.15 --seed 7 --output s.txt
    netsampler props --input g.txt [--name ca-hep] [--json]
    netsampler check --config experiment.cfg
    netsampler metrics

Exit codes: 0 success, 1 finished with skipped datasets or an invalid config
(check), 2 error.
"""

import argparse
import json
import logging
import sys
from typing import Optional

from dotenv import load_dotenv

from . import ledger
from .config import Aggregation, load_config
from .errors import NetSamplerError
from .graph import load_edge_list, summarize, write_edge_list
from .harness import run_experiment
from .registry import compare_summary
from .samplers import SamplerSpec, Technique, sample
from .validator import config_validator


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netsampler",
        description="Sample large networks and rank sampling techniques",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run a full experiment from a config file")
    run.add_argument("--config", required=True, help="Key/value experiment config")
    run.add_argument("--output", help="Override the output directory")
    run.add_argument("--workers", type=int, help="Worker threads")
    run.add_argument("--runs", type=int, help="Realizations per (network, technique)")
    run.add_argument("--master-seed", type=int, help="Master seed")
    run.add_argument(
        "--paired",
        action="store_true",
        default=None,
        help="Share each run's seed across techniques",
    )
    run.add_argument("--aggregation", choices=[a.value for a in Aggregation])
    run.add_argument("--induction-sweep", action="store_true", default=None)

    smp = sub.add_parser("sample", help="Draw one sample from an edge list")
    smp.add_argument("--input", required=True)
    smp.add_argument("--technique", required=True, help=", ".join(t.value for t in Technique))
    smp.add_argument("--fraction", type=float, default=None)
    smp.add_argument("--seed", type=int, default=0)
    smp.add_argument("--induction-fraction", type=float, default=None)
    smp.add_argument("--output", required=True)

    props = sub.add_parser("props", help="Print n, m, average degree, clustering, density")
    props.add_argument("--input", required=True)
    props.add_argument("--name", help="Compare against this registry network")
    props.add_argument("--json", action="store_true", help="Print JSON instead of text")

    check = sub.add_parser("check", help="Validate a config file without running it")
    check.add_argument("--config", required=True)

    sub.add_parser("metrics", help="Print per-technique timings from the ledger")
    return parser


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _cmd_run(args) -> int:
    config = load_config(
        args.config,
        output_dir=args.output,
        workers=args.workers,
        runs=args.runs,
        master_seed=args.master_seed,
        paired=args.paired,
        aggregation=args.aggregation,
        induction_sweep=args.induction_sweep,
    )
    bundle = run_experiment(config)
    print(f"✅ {len(bundle.rows)} rows for {len(bundle.networks)} network(s) written to {config.output_dir}")
    for name, message in bundle.errors.items():
        print(f"⚠️  skipped {name}: {message}", file=sys.stderr)
    if not bundle.networks:
        print("error: no dataset could be processed", file=sys.stderr)
        return 2
    return 1 if bundle.errors else 0


def _cmd_sample(args) -> int:
    try:
        technique = Technique(args.technique.strip().upper())
    except ValueError:
        raise NetSamplerError(
            f"unknown technique {args.technique!r}; valid: {[t.value for t in Technique]}"
        ) from None
    overrides = {
        "target_fraction": args.fraction,
        "induction_fraction": args.induction_fraction,
    }
    spec = SamplerSpec(
        technique=technique,
        seed=args.seed,
        **{k: v for k, v in overrides.items() if v is not None},
    )
    graph = load_edge_list(args.input)
    drawn = sample(graph, spec)
    path = write_edge_list(drawn, args.output)
    print(f"{technique.value}: {drawn.n} nodes, {drawn.m} edges → {path}")
    for note in drawn.notes:
        print(f"note: {note}", file=sys.stderr)
    return 0


def _cmd_props(args) -> int:
    graph = load_edge_list(args.input)
    summary = summarize(graph)
    comparison = compare_summary(args.name, summary) if args.name else None

    if args.json:
        payload = {"summary": summary.to_dict(), "ingest": graph.ingest.to_dict()}
        if comparison is not None:
            payload["registry"] = comparison
        print(json.dumps(payload, indent=2, sort_keys=True))
        return 0

    print(f"nodes:          {summary.nodes}")
    print(f"edges:          {summary.edges}")
    print(f"average degree: {summary.average_degree:.4f}")
    print(f"clustering:     {summary.clustering:.4f}")
    print(f"density:        {_fmt_optional(summary.density)}")
    if comparison is not None:
        ok = comparison["nodes_match"] and comparison["edges_match"]
        print(f"registry {comparison['name']}: {'✅ counts match' if ok else '❌ counts differ'}")
    return 0


def _cmd_check(args) -> int:
    config = load_config(args.config)
    result = config_validator.validate(config)
    for err in result["errors"]:
        print(f"error: {err}")
    for err in result["dataset_errors"].values():
        print(f"error: {err}")
    for sug in result["suggestions"]:
        print(f"suggestion: {sug}")
    print("✅ valid" if result["valid"] else "❌ invalid")
    return 0 if result["valid"] else 1


def _cmd_metrics(args) -> int:
    print(json.dumps(ledger.get_metrics(), indent=2, sort_keys=True))
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "sample": _cmd_sample,
    "props": _cmd_props,
    "check": _cmd_check,
    "metrics": _cmd_metrics,
}


def _fmt_optional(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.6g}"


def main(argv: Optional[list[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
