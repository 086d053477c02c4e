"""Command-line driver: ``oodq analyze | cohesion | emit-model``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .codec import to_jsonable
from .cohesion import analyze_cohesion, load_usecase_model
from .errors import AnalysisError
from .interchange import emit_class_model_json, load_class_model_json
from .java import parse_source_tree
from .model import ProjectModel
from .report import AnalysisOptions, assemble_report, emit_csv, emit_json, emit_system_csv
from .rollup import load_thresholds
from .svg import emit_kiviat, emit_scatter
from .system_metrics import load_baseline

log = logging.getLogger("oodq")

FORMATS = ("json", "csv")


def _formats(text: str) -> list[str]:
    chosen = [f.strip() for f in text.split(",") if f.strip()]
    bad = [f for f in chosen if f not in FORMATS]
    if bad or not chosen:
        raise argparse.ArgumentTypeError(f"formats must be drawn from {','.join(FORMATS)}")
    return chosen


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oodq", description="Object-oriented design quality analyzer.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="compute metrics and write reports")
    a.add_argument("--src", type=Path, help="Java source tree")
    a.add_argument("--model", type=Path, help="class-model interchange JSON (instead of --src)")
    a.add_argument("--thresholds", type=Path, help="threshold table (default: $OODQ_THRESHOLDS or built-in)")
    a.add_argument("--baseline", type=Path, help="design-property divisors")
    a.add_argument("--out", type=Path, default=Path("out"), help="output directory (default: out)")
    a.add_argument("--format", type=_formats, default=["json"], help="comma list of json,csv (default: json)")
    a.add_argument("--kiviat", action="store_true", help="write one Kiviat SVG per class")
    a.add_argument("--scatter", action="store_true", help="write the v/ev scatter SVG and CSV")
    a.add_argument("--fair-poor-only", action="store_true", help="rank only FAIR and POOR classes")
    a.add_argument("--no-short-circuit", action="store_true", help="do not count && || ?: as decisions")
    a.add_argument("--unit-wmc", action="store_true", help="CK wmc counts methods instead of summing v(G)")
    a.add_argument("--lcom-static", action="store_true", help="let static attributes join methods in LCOM")
    a.add_argument("--jobs", type=int, default=1, help="parser threads")

    c = sub.add_parser("cohesion", help="use-case crosscutting cohesion")
    c.add_argument("--model", type=Path, required=True, help="use-case model (YAML or JSON)")
    c.add_argument("--min-overlap", type=int, default=1, help="shared messages needed for similarity")
    c.add_argument("--out", type=Path, help="also write cohesion.json here")

    e = sub.add_parser("emit-model", help="dump the parsed class model as interchange JSON")
    e.add_argument("--src", type=Path, required=True)
    e.add_argument("--out", type=Path, help="output file (default: stdout)")
    return parser


def _safe_name(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.$-]", "_", name)


def _load_project(args: argparse.Namespace) -> tuple[ProjectModel, list[str]]:
    if args.model is not None:
        try:
            text = args.model.read_text(encoding="utf-8")
        except OSError as exc:
            raise AnalysisError(f"cannot read {args.model}: {exc}") from exc
        return load_class_model_json(text), []
    project, diags = parse_source_tree(args.src, jobs=max(args.jobs, 1))
    return project, [f"{d.path}:{d.line}: {d.severity}: {d.message}" for d in diags]


def cmd_analyze(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.src is None and args.model is None:
        parser.error("analyze needs --src or --model")
    thresholds = args.thresholds or (Path(os.environ["OODQ_THRESHOLDS"]) if os.environ.get("OODQ_THRESHOLDS") else None)
    bounds = load_thresholds(thresholds)
    baseline = load_baseline(args.baseline) if args.baseline else None
    project, diags = _load_project(args)
    log.info("analyzing %d classes", len(project.classes))
    options = AnalysisOptions(
        count_operators=not args.no_short_circuit,
        unit_wmc=args.unit_wmc,
        fair_poor_only=args.fair_poor_only,
        include_static_in_lcom=args.lcom_static,
    )
    report = assemble_report(project, bounds, baseline, options, diags)
    for d in report.diagnostics:
        print(d, file=sys.stderr)

    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    if "json" in args.format:
        (out / "report.json").write_text(emit_json(report), encoding="utf-8")
    if "csv" in args.format:
        (out / "classes.csv").write_text(emit_csv(report), encoding="utf-8", newline="")
        (out / "system.csv").write_text(emit_system_csv(report), encoding="utf-8", newline="")
    if args.kiviat:
        kdir = out / "kiviat"
        kdir.mkdir(exist_ok=True)
        for r in report.classes:
            svg = emit_kiviat(r.metrics, bounds, r.qualified_name)
            (kdir / f"{_safe_name(r.qualified_name)}.svg").write_text(svg, encoding="utf-8")
    if args.scatter:
        svg, table = emit_scatter(report.methods)
        (out / "scatter.svg").write_text(svg, encoding="utf-8")
        (out / "scatter.csv").write_text(table, encoding="utf-8", newline="")
    print(
        f"{len(report.classes)} classes, {len(report.methods)} methods, "
        f"TQI {report.indices.tqi:.2f}; reports in {out}"
    )
    return 0


def cmd_cohesion(args: argparse.Namespace) -> int:
    model, domain = load_usecase_model(args.model)
    result = analyze_cohesion(model, domain, args.min_overlap)
    text = json.dumps(to_jsonable(result), sort_keys=True, indent=1) + "\n"
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "cohesion.json").write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return 0


def cmd_emit_model(args: argparse.Namespace) -> int:
    project, diags = parse_source_tree(args.src)
    for d in diags:
        print(f"{d.path}:{d.line}: {d.severity}: {d.message}", file=sys.stderr)
    text = emit_class_model_json(project)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text, encoding="utf-8")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        if args.command == "analyze":
            return cmd_analyze(args, parser)
        if args.command == "cohesion":
            return cmd_cohesion(args)
        return cmd_emit_model(args)
    except AnalysisError as exc:
        print(f"oodq: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
