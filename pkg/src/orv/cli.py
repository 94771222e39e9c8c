"""Command-line entry point ``orv``.

Exit status: 0 for Pass/WeakPass (and successful draw/explore/experiment
runs), 1 for WeakFail, 2 for usage, input or configuration errors.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from . import __version__
from .engine import Verdict, analyze
from .experiment import ExperimentConfig, run_experiment, summarize, write_csv
from .formats import (
    ConfigFile,
    GraphicLogger,
    ParseError,
    TraceGenLoggerSpec,
    parse_hcf,
    parse_hif,
    parse_hsf,
    parse_htf,
    serialize_hif,
)
from .ir import check_interaction
from .render import DotTreeLogger, analysis_dot, ascii_diagram, term_dot
from .semantics import TraceGenLogger, explore
from .traces import Partition, PartitionError

log = logging.getLogger("orv")

EXIT_OK, EXIT_WEAKFAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _load(args, need_trace=False):
    sig = _parse(args.hsf, parse_hsf)
    i = _parse(args.hif, parse_hif, sig)
    check_interaction(i, sig)
    mu = _parse(args.htf, parse_htf, sig) if need_trace else None
    cfg = _parse(args.hcf, parse_hcf) if getattr(args, "hcf", None) else ConfigFile()
    return sig, i, mu, cfg


def _parse(path, fn, *extra):
    try:
        return fn(_read(path), *extra)
    except ParseError as e:
        raise UsageError(f"{path}: {e}") from None


def _outdir(args) -> Path:
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_draw(args) -> int:
    sig, i, _, _ = _load(args)
    out = _outdir(args)
    stem = Path(args.hif).stem
    diagram = ascii_diagram(i, sig)
    (out / f"{stem}.txt").write_text(diagram, encoding="utf-8")
    (out / f"{stem}.dot").write_text(term_dot(i, sig), encoding="utf-8")
    print(diagram, end="")
    print(f"wrote {out / (stem + '.txt')} and {out / (stem + '.dot')}")
    return EXIT_OK


def cmd_explore(args) -> int:
    sig, i, _, cfg = _load(args)
    opts = cfg.explore
    out = _outdir(args)
    loggers = []
    dot_logger = None
    for spec in opts.loggers:
        if isinstance(spec, GraphicLogger):
            dot_logger = DotTreeLogger(sig, spec.orientation == "vertical")
            loggers.append(dot_logger)
        elif isinstance(spec, TraceGenLoggerSpec):
            try:
                part = spec.resolve(sig)
            except PartitionError as e:
                raise UsageError(str(e)) from None
            loggers.append(TraceGenLogger(spec.generation, part, out / "traces", sig))
    partition = Partition.trivial(sig.lifelines)
    report = explore(i, partition, opts.to_config(seed=args.seed), loggers)
    print(f"nodes: {report.node_count}")
    print(f"edges: {report.edge_count}")
    for reason, n in sorted(report.cuts.items()):
        print(f"cut by {reason}: {n}")
    if dot_logger is not None:
        path = out / f"{Path(args.hif).stem}_explore.dot"
        path.write_text(dot_logger.dot(), encoding="utf-8")
        print(f"wrote {path}")
    files = report.artifacts.get("htf_files", [])
    if files:
        print(f"wrote {len(files)} multi-trace file(s) to {out / 'traces'}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    sig, i, mu, cfg = _load(args, need_trace=True)
    acfg = cfg.analyze.to_config()
    if args.graph:
        acfg.graphic = True
    report = analyze(i, mu, acfg)
    s = report.stats
    print(f"verdict: {report.verdict}")
    print(f"execution steps: {s.re_steps}")
    print(f"simulation steps: {s.rs_steps}")
    print(f"nodes: {s.nodes}")
    print(f"elapsed: {s.seconds:.6f}s")
    if report.witness:
        print("witness: " + " ".join(str(e) for e in report.witness))
    if s.cap_hit:
        print("warning: node cap reached, verdict is inconclusive", file=sys.stderr)
    if report.graph is not None:
        out = _outdir(args)
        path = out / f"{Path(args.htf).stem}_analysis.dot"
        vertical = all(lg.orientation == "vertical" for lg in cfg.analyze.loggers if isinstance(lg, GraphicLogger))
        path.write_text(analysis_dot(report.graph, vertical), encoding="utf-8")
        print(f"wrote {path}")
    return EXIT_WEAKFAIL if report.verdict is Verdict.WEAK_FAIL else EXIT_OK


def cmd_experiment(args) -> int:
    sig, i, _, cfg = _load(args)
    partition = Partition.discrete(sig.lifelines)
    for spec in cfg.explore.loggers:
        if isinstance(spec, TraceGenLoggerSpec):
            try:
                partition = spec.resolve(sig)
            except PartitionError as e:
                raise UsageError(str(e)) from None
    bound = cfg.explore.max_loop_depth if cfg.explore.max_loop_depth is not None else args.loops
    ecfg = ExperimentConfig(
        partition=partition,
        max_loop_instantiations=bound,
        slices=args.slices,
        slices_per_trace=args.slices_per_trace,
        repetitions=args.repetitions,
        seed=args.seed,
        jobs=args.jobs,
        analysis=cfg.analyze.to_config(),
    )
    t0 = time.perf_counter()
    rows = run_experiment(i, sig, ecfg)
    path = write_csv(rows, _outdir(args) / "experiment.csv")
    for name, counts in summarize(rows).items():
        print(f"{name}: " + ", ".join(f"{k}={v}" for k, v in counts.items()))
    print(f"{len(rows)} analyses in {time.perf_counter() - t0:.2f}s, wrote {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="orv", description="Offline runtime verification of multi-trace slices against interactions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("draw", help="render an interaction as an ASCII diagram and a DOT term tree")
    p.add_argument("hsf")
    p.add_argument("hif")
    p.add_argument("-o", "--output", default=".")
    p.set_defaults(func=cmd_draw)

    p = sub.add_parser("explore", help="explore the execution tree of an interaction")
    p.add_argument("hsf")
    p.add_argument("hif")
    p.add_argument("hcf", nargs="?")
    p.add_argument("-o", "--output", default=".")
    p.add_argument("--seed", type=int, default=0, help="seed for random priorities")
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("analyze", help="analyze a multi-trace against an interaction")
    p.add_argument("hsf")
    p.add_argument("hif")
    p.add_argument("htf")
    p.add_argument("hcf", nargs="?")
    p.add_argument("-o", "--output", default=".")
    p.add_argument("--graph", action="store_true", help="write the analysis graph as DOT")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("experiment", help="generate, slice, mutate and analyze multi-traces into a CSV")
    p.add_argument("hsf")
    p.add_argument("hif")
    p.add_argument("hcf")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--loops", type=int, default=2, help="loop instantiations when the config sets no max_loop_depth")
    p.add_argument("--slices", choices=("exhaustive", "random"), default="exhaustive")
    p.add_argument("--slices-per-trace", type=int, default=3)
    p.add_argument("--repetitions", type=int, default=5)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_experiment)
    return parser


def _setup_logging():
    level = os.environ.get("ORV_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _setup_logging()
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"orv: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, PartitionError) as e:
        print(f"orv: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:  # --help / --version
        return EXIT_OK if not e.code else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
