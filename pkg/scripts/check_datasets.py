#!/usr/bin/env python3
"""
Check local copies of the reference networks against the dataset registry.

For each NAME=PATH pair the edge list is loaded, its node and edge counts are
compared exactly, and its average degree and density must lie within 1% of
the registry values.

Usage:
    python scripts/check_datasets.py ca-hep=data/CA-HepPh.txt ca-astro=data/CA-AstroPh.txt.gz
    python scripts/check_datasets.py --list      # show registry networks and download pages
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from netsampler.graph import load_edge_list, summarize
from netsampler.registry import compare_summary, get_dataset_record, list_datasets

TOLERANCE = 0.01


def list_registry() -> None:
    for name in list_datasets():
        rec = get_dataset_record(name)
        print(f"  {name:<12} n={rec['expected_n']:>9}  m={rec['expected_m']:>10}  {rec.get('url') or '-'}")


def check(name: str, path: str) -> bool:
    print(f"\n{name}: loading {path}")
    graph = load_edge_list(path)
    result = compare_summary(name, summarize(graph))
    observed = result["observed"]
    expected = result["expected"]

    ok = result["nodes_match"] and result["edges_match"]
    print(f"    nodes:  {observed['nodes']} (expected {expected['expected_n']})")
    print(f"    edges:  {observed['edges']} (expected {expected['expected_m']})")
    for key in ("average_degree_rel_error", "density_rel_error"):
        err = result[key]
        if err is None:
            continue
        within = err <= TOLERANCE
        ok = ok and within
        print(f"    {key.replace('_rel_error', '')}: {err:.2%} off {'✓' if within else '✗'}")
    ingest = graph.ingest
    print(f"    dropped: {ingest.self_loops} self-loop(s), {ingest.duplicates} duplicate(s)")
    print(f"  {'✅' if ok else '❌'} {name}")
    return ok


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Check local edge lists against the dataset registry")
    parser.add_argument("pairs", nargs="*", metavar="NAME=PATH")
    parser.add_argument("--list", action="store_true", help="List registry networks and exit")
    args = parser.parse_args(argv)

    if args.list or not args.pairs:
        list_registry()
        return 0

    failures = 0
    for pair in args.pairs:
        name, sep, path = pair.partition("=")
        if not sep:
            parser.error(f"expected NAME=PATH, got {pair!r}")
        try:
            failures += not check(name, path)
        except (ValueError, OSError) as exc:
            print(f"  ⚠ {name}: {exc}", file=sys.stderr)
            failures += 1

    print(f"\n{len(args.pairs) - failures}/{len(args.pairs)} dataset(s) match the registry")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
