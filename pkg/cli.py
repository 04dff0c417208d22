#!/usr/bin/env python3
"""
Mikado CLI
Command line interface for decomposing monoliths and evaluating decompositions.

Exit codes: 0 success, 1 domain error, 2 usage or I/O error.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError as PydanticValidationError
from rich.table import Table

from mikado import __version__
from mikado.logging_setup import setup_logging
from mikado.ui import banner, console, result_panel

from config import MikadoConfig, load_config
from models import GenParams, Weights
from main import MikadoPipeline
from monolith import (
    best_decompositions_to_dict,
    parse_best_decompositions_file,
    parse_decomposition_file,
    serialize_decomposition,
    serialize_monolith,
)
from clustering import dendrogram_to_dict
from analysis import records_to_frame, regression_to_dict, render_regression_table
from artifacts import ArtifactWriter, comparison_frame, complexity_frame
from exceptions import ConfigurationError, MikadoError

logger = logging.getLogger("MikadoCLI")

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


def _weights(value: str) -> Weights:
    parts = value.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("weights must be four comma-separated integers A,W,R,S")
    try:
        return Weights.from_tuple(int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid weights {value!r}")


def _overrides(args: argparse.Namespace) -> Dict[str, Dict[str, Any]]:
    """Section overrides from flags; unset flags stay None and are ignored."""
    return {
        "system": {"log_level": args.log_level},
        "similarity": {"sequence_self_pairs": args.sequence_self_pairs or None},
        "clustering": {"distance_mode": args.distance_mode, "linkage": args.linkage},
        "complexity": {
            "trace_aggregation": args.trace_aggregation,
            "strict_summation": args.strict_summation or None,
        },
        "mojo": {"strategy": args.strategy},
        "analysis": {
            "step": args.step,
            "n_min": args.n_min,
            "n_max": args.n_max,
            "intercept": args.intercept,
            "workers": args.workers,
        },
        "output": {"directory": args.output_dir, "decimals": args.decimals},
    }


def _writer(config: MikadoConfig) -> ArtifactWriter:
    return ArtifactWriter(config.output.directory, config.output.decimals)


def _finish(writer: ArtifactWriter, command: str, config: MikadoConfig, inputs: List[str]) -> None:
    writer.write_manifest(command, config.to_dict(), inputs, __version__)
    console.print(f"Artifacts in [bold]{writer.output_dir}[/bold] (manifest sha256 {writer.manifest_digest})")


# -------------------------------------------------------------------------
# COMMANDS
# -------------------------------------------------------------------------

def cmd_validate(args: argparse.Namespace, pipeline: MikadoPipeline) -> int:
    monolith = pipeline.load_monolith(args.trace_file)
    report = pipeline.validate(monolith)

    table = Table(title=f"Validation of {args.trace_file}")
    table.add_column("Severity")
    table.add_column("Code", style="cyan")
    table.add_column("Location")
    table.add_column("Message")
    for issue in report.errors:
        table.add_row("[red]error[/red]", issue.code, issue.location, issue.message)
    for issue in report.warnings:
        table.add_row("[yellow]warning[/yellow]", issue.code, issue.location, issue.message)
    if report.errors or report.warnings:
        console.print(table)

    result_panel(
        f"{len(monolith.functionalities)} functionalities, {len(monolith.entities)} entities\n"
        f"{len(report.errors)} errors, {len(report.warnings)} warnings",
        title="Accepted" if report.accepted else "Rejected",
        ok=report.accepted,
    )
    return EXIT_OK if report.accepted else EXIT_DOMAIN


def cmd_decompose(args: argparse.Namespace, pipeline: MikadoPipeline) -> int:
    monolith = pipeline.load_monolith(args.trace_file)
    decomposition, dendrogram = pipeline.decompose(monolith, args.weights, args.n)

    writer = _writer(pipeline.config)
    writer.write_text("decomposition.json", serialize_decomposition(decomposition))
    writer.write_json("dendrogram.json", dendrogram_to_dict(dendrogram))
    _finish(writer, "decompose", pipeline.config, [args.trace_file])

    table = Table(title=f"{args.weights.label}, N={args.n}")
    table.add_column("Cluster", style="cyan")
    table.add_column("Entities")
    for name, members in sorted(decomposition.clusters.items(), key=lambda kv: min(kv[1])):
        table.add_row(name, ", ".join(monolith.entity_label(e) for e in sorted(members)))
    console.print(table)
    return EXIT_OK


def cmd_complexity(args: argparse.Namespace, pipeline: MikadoPipeline) -> int:
    monolith = pipeline.load_monolith(args.trace_file)
    decomposition = parse_decomposition_file(args.decomposition_file)
    report = pipeline.complexity(monolith, decomposition)

    writer = _writer(pipeline.config)
    writer.write_json("complexity.json", report.model_dump(mode="json"))
    writer.write_frame("complexity.csv", complexity_frame(report))
    _finish(writer, "complexity", pipeline.config, [args.trace_file, args.decomposition_file])

    body = (
        f"total: {report.total:.6f}\n"
        f"maxComplexity: {report.max_complexity:.6f}\n"
        f"uniform: {report.uniform:.6f}"
    )
    for finding in report.findings:
        body += f"\n[yellow]{finding}[/yellow]"
    result_panel(body, title="Complexity")
    return EXIT_OK


def cmd_mojofm(args: argparse.Namespace, pipeline: MikadoPipeline) -> int:
    a = parse_decomposition_file(args.decomposition_a)
    b = parse_decomposition_file(args.decomposition_b)
    result = pipeline.compare(a, b)
    result_panel(
        f"mno: {result.mno}\nmax mno: {result.max_mno} ({result.provenance})\n"
        f"MoJoFM: {result.mojo_fm:.2f}",
        title="MoJoFM",
    )
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, pipeline: MikadoPipeline) -> int:
    config = pipeline.config
    inputs = [args.trace_file]
    monolith = pipeline.load_monolith(args.trace_file)
    findings: List[str] = []
    if args.common_with:
        inputs.append(args.common_with)
        monolith, findings = pipeline.evened(monolith, pipeline.load_monolith(args.common_with))
    expert = None
    if args.expert:
        inputs.append(args.expert)
        expert = parse_decomposition_file(args.expert)
    other_best = None
    if args.compare_best:
        inputs.append(args.compare_best)
        other_best = parse_best_decompositions_file(args.compare_best)

    banner("Decomposition sweep", f"step {config.analysis.step}, N {config.analysis.n_min}..{config.analysis.n_max}")
    outcome = pipeline.sweep(
        monolith,
        expert=expert,
        source=args.source,
        progress=not args.quiet,
        other_best=other_best,
        other_source=args.compare_source,
    )
    findings.extend(outcome.findings)

    writer = _writer(config)
    writer.write_frame("sweep.csv", records_to_frame(outcome.records))
    writer.write_frame("best_per_n.csv", records_to_frame(list(outcome.best.values())))
    writer.write_json("best_decompositions.json", best_decompositions_to_dict(outcome.best))
    if outcome.regression is not None:
        writer.write_json("regression.json", regression_to_dict(outcome.regression))
    if outcome.comparison:
        writer.write_frame("comparison.csv", comparison_frame(outcome.comparison))
    if findings:
        writer.write_json("findings.json", findings)
    _finish(writer, "sweep", config, inputs)

    best = Table(title="Best decomposition per N")
    best.add_column("N", justify="right")
    best.add_column("Weights (A,W,R,S)")
    best.add_column("Uniform complexity", justify="right")
    for n, record in outcome.best.items():
        best.add_row(str(n), ",".join(map(str, record.weights.as_tuple())), f"{record.uniform_complexity:.6f}")
    console.print(best)

    if outcome.regression is not None:
        console.print(render_regression_table(outcome.regression))

    if outcome.comparison:
        comparison = Table(title="MoJoFM per N")
        comparison.add_column("N", justify="right")
        comparison.add_column("Source")
        comparison.add_column("MoJoFM", justify="right")
        for row in outcome.comparison:
            comparison.add_row(str(row.n_clusters), row.source, f"{row.mojo_fm:.2f}")
        comparison.add_section()
        for source in dict.fromkeys(r.source for r in outcome.comparison):
            scores = [r.mojo_fm for r in outcome.comparison if r.source == source]
            comparison.add_row("avg", source, f"{sum(scores) / len(scores):.2f}")
        console.print(comparison)
    return EXIT_OK


def cmd_generate(args: argparse.Namespace, pipeline: MikadoPipeline) -> int:
    params = GenParams(
        seed=args.seed,
        n_entities=args.entities,
        n_functionalities=args.functionalities,
        traces_per_functionality=args.traces,
        max_trace_length=args.max_length,
        write_ratio=args.write_ratio,
        clusteredness_bias=args.bias,
        n_families=args.families,
    )
    monolith = pipeline.generate(params)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(serialize_monolith(monolith), encoding="utf-8")
    console.print(
        f"Wrote {out}: {len(monolith.functionalities)} functionalities, {len(monolith.entities)} entities"
    )
    return EXIT_OK


def cmd_coverage(args: argparse.Namespace, pipeline: MikadoPipeline) -> int:
    reference = pipeline.load_monolith(args.reference_file)
    other = pipeline.load_monolith(args.other_file)
    report = pipeline.coverage(reference, other)

    table = Table(title=f"Coverage of {args.reference_file} by {args.other_file}")
    table.add_column("Measure", style="cyan")
    table.add_column("%", justify="right")
    table.add_row("Functionalities", f"{report.functionalities_covered_pct:.2f}")
    table.add_row("Entities", f"{report.entities_covered_pct:.2f}")
    table.add_row("Entities per functionality", f"{report.avg_entities_per_functionality_pct:.2f}")
    console.print(table)
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "decompose": cmd_decompose,
    "complexity": cmd_complexity,
    "mojofm": cmd_mojofm,
    "sweep": cmd_sweep,
    "generate": cmd_generate,
    "coverage": cmd_coverage,
}


# -------------------------------------------------------------------------
# PARSER
# -------------------------------------------------------------------------

def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("configuration")
    group.add_argument("--config", help="JSON configuration file")
    group.add_argument("--output-dir", help="Artifact directory (default: $MIKADO_OUTPUT_DIR or mikado_out)")
    group.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    group.add_argument("--quiet", action="store_true", help="Only warnings, no progress bar")
    group.add_argument("--distance-mode", choices=["ROW_EUCLIDEAN", "ONE_MINUS_SYM"])
    group.add_argument("--linkage", choices=["AVERAGE", "SINGLE", "COMPLETE"])
    group.add_argument("--sequence-self-pairs", action="store_true")
    group.add_argument("--trace-aggregation", choices=["MEAN", "MAX"])
    group.add_argument("--strict-summation", action="store_true")
    group.add_argument("--strategy", choices=["BIGGEST_CLUSTER", "DROP_UNCOMMON"], help="Universe alignment")
    group.add_argument("--step", type=int, help="Weight grid step")
    group.add_argument("--n-min", type=int)
    group.add_argument("--n-max", type=int)
    group.add_argument("--intercept", choices=["NONE", "PSEUDOINVERSE"])
    group.add_argument("--workers", type=int)
    group.add_argument("--decimals", type=int)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="mikado", description="Mikado CLI")
    parser.add_argument("--version", action="version", version=f"mikado {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, help="Command to run")

    p = subparsers.add_parser("validate", parents=[common], help="Validate a trace file")
    p.add_argument("trace_file")

    p = subparsers.add_parser("decompose", parents=[common], help="Cut one decomposition")
    p.add_argument("trace_file")
    p.add_argument("--weights", type=_weights, required=True, help="A,W,R,S percentages, e.g. 40,20,20,20")
    p.add_argument("-n", type=int, required=True, help="Number of clusters")

    p = subparsers.add_parser("complexity", parents=[common], help="Score a decomposition")
    p.add_argument("trace_file")
    p.add_argument("decomposition_file")

    p = subparsers.add_parser("mojofm", parents=[common], help="Compare two decompositions")
    p.add_argument("decomposition_a")
    p.add_argument("decomposition_b", help="Reference decomposition")

    p = subparsers.add_parser("sweep", parents=[common], help="Weight x cluster-count sweep with regression")
    p.add_argument("trace_file")
    p.add_argument("--expert", help="Reference decomposition to compare the best decompositions with")
    p.add_argument("--common-with", help="Restrict to functionalities and entities shared with this trace file")
    p.add_argument("--source", default="static", help="Label of the trace collection in comparison rows")
    p.add_argument("--compare-best", help="best_decompositions.json of another sweep to compare with per N")
    p.add_argument("--compare-source", default="dynamic", help="Label of the other sweep's collection")

    p = subparsers.add_parser("generate", parents=[common], help="Generate a synthetic trace file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--entities", type=int, default=20)
    p.add_argument("--functionalities", type=int, default=10)
    p.add_argument("--traces", type=int, default=3, help="Traces per functionality")
    p.add_argument("--max-length", type=int, default=10, help="Maximum accesses per trace")
    p.add_argument("--write-ratio", type=float, default=0.3)
    p.add_argument("--bias", type=float, default=0.8, help="Clusteredness bias in [0, 1]")
    p.add_argument("--families", type=int, default=1)
    p.add_argument("--out", required=True, help="Trace file to write")

    p = subparsers.add_parser("coverage", parents=[common], help="Compare two collections of one monolith")
    p.add_argument("reference_file")
    p.add_argument("other_file")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config, _overrides(args))
    except ConfigurationError as e:
        setup_logging(quiet=args.quiet)
        console.print(f"[red]Configuration error:[/red] {e.message}")
        return EXIT_USAGE

    setup_logging(config.system.log_level, quiet=args.quiet)

    try:
        pipeline = MikadoPipeline(config)
        return COMMANDS[args.command](args, pipeline)
    except ConfigurationError as e:
        console.print(f"[red]Configuration error:[/red] {e.message}")
        return EXIT_USAGE
    except MikadoError as e:
        logger.debug(f"Command failed: {e.to_dict()}", exc_info=True)
        detail = f" {e.context}" if e.context else ""
        console.print(f"[red]{e.__class__.__name__}:[/red] {e.message}{detail}")
        return EXIT_USAGE if e.code == "IO" else EXIT_DOMAIN
    except PydanticValidationError as e:
        console.print(f"[red]Invalid parameters:[/red] {e}")
        return EXIT_DOMAIN
    except OSError as e:
        console.print(f"[red]I/O error:[/red] {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
