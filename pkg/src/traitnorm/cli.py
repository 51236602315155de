"""Command-line front end: ingest, normalize, metrics, bench, check, synth.

Stages communicate through dump files only; there is no live database.
Every command writes a run manifest next to its primary output recording
input checksums and per-stage outcomes, so published numbers stay auditable.

Exit codes: 0 success, 1 conformance failure, 2 input error,
3 dependency violation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .conformance import check_5gnf
from .dumpio import DumpFormatError, dump, load_dump
from .graph import GraphError
from .ingest import IngestError, load, load_mapping
from .metrics import ablation_table, render_table
from .normalize import (
    NormalizationError,
    load_config,
    run_pipeline,
    select_families,
)
from .query import PlanError, load_workload, workload
from .synth import make_synthetic
from .tfd import DependencyError, load_dependencies

EXIT_OK = 0
EXIT_NONCONFORMING = 1
EXIT_INPUT_ERROR = 2
EXIT_DEPENDENCY_VIOLATION = 3


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


class Manifest:
    """Run record: input checksums (taken up front), stage outcomes, outputs."""

    def __init__(self, command: str, inputs):
        self.doc = {
            "tool": "traitnorm",
            "version": __version__,
            "command": command,
            "inputs": {},
            "outputs": [],
            "stages": {},
            "exit_code": None,
        }
        for path in inputs:
            if path and Path(path).exists():
                self.doc["inputs"][str(path)] = _sha256(Path(path))

    def stage(self, name: str, summary) -> None:
        self.doc["stages"][name] = summary

    def output(self, path) -> None:
        self.doc["outputs"].append(str(path))

    def write(self, anchor, exit_code: int) -> None:
        if anchor is None:
            return
        self.doc["exit_code"] = exit_code
        path = Path(str(anchor) + ".manifest.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.doc, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _write_json(path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _emit(rows, fmt: str, columns=None) -> None:
    if fmt == "json":
        print(json.dumps(rows, indent=2, sort_keys=True))
    else:
        print(render_table(rows, columns), end="")


def _load_config_with_overrides(args):
    config = load_config(args.config)
    if getattr(args, "tau", None) is not None:
        config.tau = args.tau
    if getattr(args, "deps", None) is not None:
        config.dependencies = load_dependencies(args.deps)
    return config


# ----------------------------------------------------------------- commands

def cmd_ingest(args) -> int:
    manifest = Manifest("ingest", [args.mapping])
    code = EXIT_INPUT_ERROR
    try:
        mapping = load_mapping(args.mapping)
        graph, report = load(mapping, args.data)
        dump(graph, args.out)
        manifest.output(args.out)
        manifest.stage("ingest", {
            "nodes": graph.node_count(),
            "edges": graph.edge_count(),
        })
        print(report.render(), end="")
        print(f"nodes={graph.node_count()} edges={graph.edge_count()}")
        code = EXIT_OK
    except (IngestError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    finally:
        manifest.write(args.out, code)
    return code


def cmd_normalize(args) -> int:
    manifest = Manifest("normalize", [args.input, args.config, args.deps])
    code = EXIT_INPUT_ERROR
    try:
        graph = load_dump(args.input)
        config = _load_config_with_overrides(args)
        result = run_pipeline(graph, config)
        dump(result.graph, args.out)
        manifest.output(args.out)
        report_doc = result.report.to_dict()
        if args.report:
            _write_json(args.report, report_doc)
            manifest.output(args.report)
        manifest.stage("normalize", {
            "traits": report_doc["traits_created"],
            "links": report_doc["links_added"],
            "properties_removed": report_doc["properties_removed"],
            "lossless": report_doc["lossless"],
            "conforming": report_doc["conforming"],
        })
        print(
            "traits="
            + ",".join(f"{k}:{v}" for k, v in
                       sorted(result.report.traits_created.items()))
            + f" links={result.report.links_added}"
            + f" removed={result.report.properties_removed}"
            + f" lossless={result.report.lossless}"
            + f" conforming={result.report.conforming}"
        )
        if not result.report.lossless:
            code = EXIT_NONCONFORMING
        elif not result.report.conforming:
            code = EXIT_DEPENDENCY_VIOLATION
        else:
            code = EXIT_OK
    except (DumpFormatError, NormalizationError, DependencyError, GraphError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    finally:
        manifest.write(args.out, code)
    return code


def cmd_metrics(args) -> int:
    manifest = Manifest("metrics", [args.input, args.compare, args.config])
    code = EXIT_INPUT_ERROR
    try:
        config = _load_config_with_overrides(args)
        states = [("input", load_dump(args.input))]
        if args.compare:
            states.append(("compare", load_dump(args.compare)))
        families = config.families or select_families(states[0][1], config)
        rows = ablation_table(states, families)
        manifest.stage("metrics", {"states": [r["state"] for r in rows]})
        _emit(rows, args.format)
        code = EXIT_OK
    except (DumpFormatError, NormalizationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    finally:
        manifest.write(args.out, code)
    return code


def cmd_bench(args) -> int:
    manifest = Manifest("bench", [args.pre, args.post, args.workload])
    code = EXIT_INPUT_ERROR
    try:
        pre_graph = load_dump(args.pre)
        post_graph = load_dump(args.post)
        queries = load_workload(args.workload)
        rows = workload(pre_graph, post_graph, queries)
        manifest.stage("bench", {
            "queries": len(rows),
            "all_results_equal": all(r["results_equal"] for r in rows),
        })
        _emit(rows, args.format)
        if args.out:
            _write_json(args.out, rows)
            manifest.output(args.out)
        code = EXIT_OK
    except (DumpFormatError, PlanError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    finally:
        manifest.write(args.out, code)
    return code


def cmd_check(args) -> int:
    manifest = Manifest("check", [args.input, args.config])
    code = EXIT_INPUT_ERROR
    try:
        graph = load_dump(args.input)
        config = _load_config_with_overrides(args)
        report = check_5gnf(graph, config)
        manifest.stage("check", {
            "conforming": report.conforming,
            "findings": report.finding_count,
        })
        if args.format == "json":
            doc = report.to_dict()
            for key in ("canonicality_violations", "atomicity_violations",
                        "exclusivity_findings"):
                doc[key] = doc[key][:50]
            print(json.dumps(doc, indent=2, sort_keys=True))
        elif report.conforming:
            print("conforming")
        else:
            print(f"non-conforming: {report.finding_count} findings")
        code = EXIT_OK if report.conforming else EXIT_NONCONFORMING
    except (DumpFormatError, NormalizationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_INPUT_ERROR
    finally:
        manifest.write(args.out, code)
    return code


def cmd_synth(args) -> int:
    manifest = Manifest("synth", [])
    code = EXIT_INPUT_ERROR
    try:
        graph = make_synthetic(args.elements, args.keys, args.distinct,
                               args.seed)
        dump(graph, args.out)
        manifest.output(args.out)
        manifest.stage("synth", {
            "nodes": graph.node_count(),
            "edges": graph.edge_count(),
            "seed": args.seed,
        })
        print(f"nodes={graph.node_count()} edges={graph.edge_count()}")
        code = EXIT_OK
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
    finally:
        manifest.write(args.out, code)
    return code


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="traitnorm",
        description="Trait-based metadata normalization for property graphs",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load a CSV bundle into a graph dump")
    p.add_argument("--mapping", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("normalize", help="run the trait-extraction pipeline")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--tau", type=int, default=None)
    p.add_argument("--deps", default=None,
                   help="dependency file overriding the config")
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("metrics", help="reuse/complexity metrics for dumps")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--compare", default=None)
    p.add_argument("--config", required=True)
    p.add_argument("--tau", type=int, default=None)
    p.add_argument("--deps", default=None)
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("bench", help="run a workload on a pre/post dump pair")
    p.add_argument("--pre", required=True)
    p.add_argument("--post", required=True)
    p.add_argument("--workload", required=True)
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("check", help="normal-form conformance check")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--tau", type=int, default=None)
    p.add_argument("--deps", default=None)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("synth", help="generate a synthetic metadata graph")
    p.add_argument("--elements", type=int, required=True)
    p.add_argument("--keys", type=int, default=6)
    p.add_argument("--distinct", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
