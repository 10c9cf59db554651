"""Command-line front end.

    tacap validate <file> [--config <file>] [--format text|tsv|json]
    tacap stats <file> --table 3|4|5a|5b|5c|6|7|hist [--format text|csv|json]
    tacap simulate <file> --dt <s> --mode scripted|causal [--shape linear|power:<k>] [-o <prefix>]
    tacap render <file> scam --ca <ID> | --means <group> [-o <path>]
    tacap render <file> caar [--show-dangling] [-o <path>]
    tacap render <file> frames --dt <s> [-o <path>]
    tacap report <file> -o <report.md>

``<file>`` is a corpus document or a SCAM CSV; ``@bundled`` names the corpus
shipped with the package.  Exit codes: 0 ok, 1 the corpus has errors,
2 usage or I/O problem, 3 internal failure.
"""
from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional, Sequence

from . import data
from .dsl import ParseError, import_scam_csv, parse_corpus
from .metrics import (
    BASES, GROUPS, TABLE_NAMES, EmptyGroup, analysis_subset, build_table, markdown_report, timing_profile,
    type_means,
)
from .model import Corpus
from .render import export_frames, render_caar_svg, render_scam_svg, scam_breakpoints
from .sim import CausalConfig, ShapeConfig, events_csv, residuals_csv, simulate, simulate_causal, traces_csv
from .validate import ConfigError, ValidatorConfig, parse_config, validate

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
CONFIG_ENV = "TACAP_CONFIG"


class UsageError(Exception):
    pass


class CorpusError(Exception):
    pass


def atomic_write(path, text: str):
    path = Path(path)
    parent = path.parent if str(path.parent) else Path(".")
    parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        mask = os.umask(0)
        os.umask(mask)
        os.chmod(tmp, 0o666 & ~mask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_corpus(path: str, err) -> Corpus:
    if path == "@bundled":
        text, is_csv = data.bundled_text(), False
    else:
        try:
            text = Path(path).read_bytes()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        is_csv = path.lower().endswith(".csv")
    warnings: list = []
    try:
        corpus = import_scam_csv(text, warnings) if is_csv else parse_corpus(text, warnings)
    except ParseError as exc:
        for d in exc.diagnostics:
            print(f"{path}:{d}", file=err)
        raise CorpusError(f"{path}: {len(exc.errors)} parse error(s)") from None
    for d in warnings:
        print(f"{path}:{d}", file=err)
    return corpus


def _stamp_line(args) -> str:
    if not getattr(args, "stamp", False):
        return ""
    return f"generated {datetime.datetime.now(datetime.timezone.utc).isoformat(timespec='seconds')}\n"


def _emit(text: str, out_path: Optional[str], out):
    if out_path:
        atomic_write(out_path, text)
    else:
        out.write(text)


# ---------------------------------------------------------------- commands

def cmd_validate(args, out, err) -> int:
    config_path = args.config or os.environ.get(CONFIG_ENV)
    config = ValidatorConfig()
    if config_path:
        try:
            config = parse_config(Path(config_path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise UsageError(f"cannot read config {config_path}: {exc.strerror}") from None
        except ConfigError as exc:
            raise UsageError(f"{config_path}: {exc}") from None
    corpus = load_corpus(args.file, err)
    report = validate(corpus, config)
    if args.format == "tsv":
        text = report.to_tsv()
    elif args.format == "json":
        text = json.dumps({"counts": report.counts,
                           "findings": [f.__dict__ for f in report.findings]}, indent=2) + "\n"
    else:
        text = report.to_text() + _stamp_line(args)
    _emit(text, args.output, out)
    return EXIT_INVALID if report.has_errors else EXIT_OK


def cmd_stats(args, out, err) -> int:
    corpus = load_corpus(args.file, err)
    table = build_table(corpus, args.table, args.basis)
    if args.format == "csv":
        text = table.to_csv()
    elif args.format == "json":
        text = json.dumps({"table": table.name, "title": table.title, "header": list(table.header),
                           "rows": [list(r) for r in table.rows]}, indent=2) + "\n"
    else:
        text = table.to_text()
    _emit(text, args.output, out)
    return EXIT_OK


def _shape(args) -> ShapeConfig:
    try:
        return ShapeConfig.parse(args.shape, dt=args.dt, end_time_override=args.end_time)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_simulate(args, out, err) -> int:
    shape = _shape(args)
    corpus = load_corpus(args.file, err)
    residuals = None
    if args.mode == "causal":
        result = simulate_causal(corpus, shape, CausalConfig(max_residual=args.max_residual))
        traces, residuals = result.traces, result.residuals
        for f in result.findings:
            print(f"{f.severity}\t{f.rule}\t{f.locus}\t{f.code}: {f.message}", file=err)
    else:
        traces = simulate(corpus, shape)

    if args.format == "json":
        doc = {"shape": shape.label, "dt": shape.dt, "mode": args.mode,
               "traces": [{"id": tr.ca_id, "t": tr.times, "n": [s.n for s in tr.samples],
                           "state": [s.state.value for s in tr.samples],
                           "events": [[e.t, e.kind.value] for e in tr.events]} for tr in traces]}
        if residuals is not None:
            doc["residuals"] = [{"ca": r.ca_id, "predicted_igtig": r.predicted,
                                 "recorded_igtig": r.recorded, "residual": r.residual} for r in residuals]
        _emit(json.dumps(doc) + "\n", args.output, out)
        return EXIT_OK

    if not args.output:
        out.write(traces_csv(traces))
        return EXIT_OK
    stem = args.output[:-4] if args.output.lower().endswith(".csv") else args.output
    traces_path = args.output if args.output.lower().endswith(".csv") else stem + "_traces.csv"
    written = [traces_path, stem + "_events.csv"]
    atomic_write(traces_path, traces_csv(traces))
    atomic_write(written[1], events_csv(traces, corpus))
    if residuals is not None:
        written.append(stem + "_residuals.csv")
        atomic_write(written[2], residuals_csv(residuals))
    for path in written:
        print(f"wrote {path}", file=out)
    return EXIT_OK


def _target(output: Optional[str], default_name: str) -> str:
    if output is None:
        return default_name
    if output.endswith(os.sep) or os.path.isdir(output):
        return os.path.join(output, default_name)
    return output


def cmd_render(args, out, err) -> int:
    corpus = load_corpus(args.file, err)
    if args.kind == "scam":
        if (args.ca is None) == (args.means is None):
            raise UsageError("render scam needs exactly one of --ca or --means")
        try:
            shape = ShapeConfig.parse(args.shape) if args.shape else ShapeConfig()
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if args.ca is not None:
            ca = corpus.get(args.ca)
            if ca is None:
                raise UsageError(f"no CA {args.ca!r} in corpus")
            curve = scam_breakpoints(ca, shape, corpus.end_time)
            jobs = [(f"scam_{ca.id}.svg", curve)]
        else:
            groups = GROUPS if args.means == "each" else [g for g in GROUPS if g.lower() == args.means.lower()]
            if not groups:
                raise UsageError(f"--means must be one of {', '.join(GROUPS)} or each")
            subset = analysis_subset(corpus)
            means = {m.group: m for m in type_means(subset)}
            profile = timing_profile(subset, args.basis)
            jobs = []
            for g in groups:
                m = means[g].rounded() if args.basis == "rounded" else means[g]
                jobs.append((f"scam_{g}.svg", scam_breakpoints(m, times=profile[g])))
        if len(jobs) > 1 and args.output and not (os.path.isdir(args.output) or args.output.endswith(os.sep)):
            os.makedirs(args.output, exist_ok=True)
        for name, curve in jobs:
            path = _target(args.output, name)
            atomic_write(path, render_scam_svg(curve))
            print(f"wrote {path}", file=out)
        return EXIT_OK
    if args.kind == "caar":
        path = _target(args.output, "caar.svg")
        atomic_write(path, render_caar_svg(corpus, show_dangling=args.show_dangling,
                                           size_by_potn=args.size_by_potn))
        print(f"wrote {path}", file=out)
        return EXIT_OK
    # frames
    if args.dt is None:
        raise UsageError("render frames needs --dt")
    sim_dt = args.sim_dt if args.sim_dt is not None else args.dt
    if sim_dt > args.dt + 1e-12:
        raise UsageError("--sim-dt must not exceed --dt")
    try:
        shape = ShapeConfig.parse(args.shape or "linear", dt=sim_dt)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    path = _target(args.output, "frames.json")
    atomic_write(path, export_frames(simulate(corpus, shape), args.dt))
    print(f"wrote {path}", file=out)
    return EXIT_OK


def cmd_report(args, out, err) -> int:
    corpus = load_corpus(args.file, err)
    text = markdown_report(corpus, args.basis)
    stamp = _stamp_line(args)
    if stamp:
        text += "\n" + stamp
    atomic_write(args.output, text)
    print(f"wrote {args.output}", file=out)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _positive(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not value > 0 or value == float("inf"):
        raise argparse.ArgumentTypeError(f"{text!r} must be a positive number")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tacap", description="Cell-assembly corpus toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("validate", help="lint a corpus")
    p.add_argument("file")
    p.add_argument("--config", help=f"rule config file (falls back to ${CONFIG_ENV})")
    p.add_argument("--format", choices=("text", "tsv", "json"), default="text")
    p.add_argument("-o", "--output")
    p.add_argument("--stamp", action="store_true", help="append a generation timestamp")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stats", help="print one derived table")
    p.add_argument("file")
    p.add_argument("--table", required=True, choices=TABLE_NAMES)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--basis", choices=BASES, default="rounded",
                   help="means used by the derived tables (default: one-decimal means)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("simulate", help="sample lifecycle trajectories")
    p.add_argument("file")
    p.add_argument("--dt", type=_positive, required=True)
    p.add_argument("--mode", choices=("scripted", "causal"), required=True)
    p.add_argument("--shape", default="linear", help="linear or power:<exponent>")
    p.add_argument("--end-time", type=float, help="override the corpus horizon")
    p.add_argument("--max-residual", type=float, default=CausalConfig.max_residual)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output", help="output prefix or traces .csv path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("render", help="draw diagrams or export frames")
    p.add_argument("file")
    p.add_argument("kind", choices=("scam", "caar", "frames"))
    p.add_argument("--ca")
    p.add_argument("--means", help="group name, or 'each' for all four")
    p.add_argument("--basis", choices=BASES, default="rounded")
    p.add_argument("--shape", help="linear or power:<exponent> (scam, frames)")
    p.add_argument("--show-dangling", action="store_true")
    p.add_argument("--size-by-potn", action="store_true")
    p.add_argument("--dt", type=_positive, help="frame spacing in seconds")
    p.add_argument("--sim-dt", type=_positive, help="simulation step for frames (default: --dt)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("report", help="write all tables as Markdown")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--basis", choices=BASES, default="rounded")
    p.add_argument("--stamp", action="store_true")
    p.set_defaults(func=cmd_report)
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        old_out, old_err = sys.stdout, sys.stderr
        sys.stdout, sys.stderr = out, err  # argparse prints help/usage to these
        try:
            args = parser.parse_args(argv)
        finally:
            sys.stdout, sys.stderr = old_out, old_err
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args, out, err)
    except UsageError as exc:
        print(f"tacap: {exc}", file=err)
        return EXIT_USAGE
    except (CorpusError, EmptyGroup) as exc:
        print(f"tacap: {exc}", file=err)
        return EXIT_INVALID
    except OSError as exc:
        print(f"tacap: {exc}", file=err)
        return EXIT_USAGE
    except Exception as exc:  # anything else is a bug or a broken invariant
        print(f"tacap: internal error: {type(exc).__name__}: {exc}", file=err)
        return EXIT_INTERNAL


def main():
    sys.exit(run())
