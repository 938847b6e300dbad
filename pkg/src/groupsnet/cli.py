"""Command-line pipelines over the library.

Subcommands:

  ingest    parse and canonicalize a contact CSV, write summary stats
  synth     generate a synthetic trace from a key=value config file
  groups    detect, track and fit group meetings; dump timelines and PDFs
  route     print the most probable group route for one node pair
  simulate  run the forwarding experiment, write metric curve CSVs
  subset    materialize snowball subsets of a trace

Every output directory gets a manifest.json carrying the exact configs,
seeds and input trace digest, and all floats print via repr, so a rerun of
the same manifest reproduces every byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, replace
from pathlib import Path

from .experiment import (
    DAY,
    HOUR,
    KNOWN_POLICIES,
    ExperimentConfig,
    build_timelines,
    overhead_scaling,
    run_experiment,
    snowball_subset,
    write_curves_csv,
    write_scaling_csv,
)
from .policy import build_group_graph, most_probable_route, route_to_json
from .regularity import Histogram, fit_all, group_remeeting_pdf
from .slicing import COUNT, DURATION, SlicingParams, slice_and_threshold
from .synth import SynthConfig, generate_synthetic
from .trace import INTERVAL, Trace, TraceFormatError, ingest_csv
from .tracking import detect_meetings, recent_groups, timelines_to_json, track


def _add_source_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--trace", type=Path, help="contact CSV (a,b,start[,end])")
    src.add_argument("--synth-config", type=Path, help="synthetic generator config file")


def _add_slicing_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tw", type=int, default=HOUR, help="time window length, seconds")
    p.add_argument("--wth", type=float, default=None,
                   help="edge weight threshold (default: 2 contacts, or 600 s in duration mode)")
    p.add_argument("--k", type=int, default=3, help="clique size for community detection")


def _load_trace(args) -> Trace:
    if args.trace is not None:
        return ingest_csv(args.trace)
    return generate_synthetic(SynthConfig.from_file(args.synth_config))


def _slicing_params(trace: Trace, args) -> SlicingParams:
    mode = DURATION if trace.duration_mode == INTERVAL else COUNT
    return SlicingParams(tw=args.tw, weight_mode=mode, w_th=args.wth)


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _write_histogram_csv(path: Path, hist: Histogram) -> None:
    lines = ["bin_start,probability"]
    for bin_start, prob in hist.to_rows():
        lines.append(f"{bin_start!r},{prob!r}")
    path.write_text("\n".join(lines) + "\n")


def _manifest(args, trace: Trace, extra: dict | None = None) -> dict:
    obj = {
        "command": args.command,
        "trace_sha256": trace.sha256(),
        "trace_summary": trace.summary(),
        "source": str(args.trace) if getattr(args, "trace", None) else None,
        "synth_config": str(args.synth_config) if getattr(args, "synth_config", None) else None,
    }
    if extra:
        obj.update(extra)
    return obj


def cmd_ingest(args) -> int:
    trace = ingest_csv(args.trace)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    trace.write_csv(out / "trace.csv")
    summary = trace.summary()
    if trace.report is not None:
        summary["dropped_self_contacts"] = trace.report.self_contacts
        summary["dropped_duplicates"] = trace.report.duplicates
    _write_json(out / "summary.json", summary)
    print(json.dumps(summary, sort_keys=True))
    return 0


def cmd_synth(args) -> int:
    cfg = SynthConfig.from_file(args.synth_config)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    trace = generate_synthetic(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    trace.write_csv(out / "trace.csv")
    _write_json(out / "manifest.json", {
        "command": "synth",
        "config": asdict(cfg),
        "trace_sha256": trace.sha256(),
        "trace_summary": trace.summary(),
    })
    print(json.dumps(trace.summary(), sort_keys=True))
    return 0


def cmd_groups(args) -> int:
    trace = _load_trace(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    params = _slicing_params(trace, args)
    windows = slice_and_threshold(trace, params)
    timelines = track(detect_meetings(windows, k=args.k))

    _write_json(out / "timelines.json", timelines_to_json(timelines))
    _write_histogram_csv(out / "remeet_pdf.csv",
                         group_remeeting_pdf(timelines, tw=args.tw))
    lines = ["group_id,lambda,r2,n"]
    for gid, f in fit_all(timelines, tw=args.tw):
        lines.append(f"{gid},{f.lambda_hat!r},{f.r_squared!r},{f.n_meetings}")
    (out / "fits.csv").write_text("\n".join(lines) + "\n")

    _write_json(out / "manifest.json", _manifest(args, trace, {
        "tw": args.tw, "w_th": params.w_th, "k": args.k,
        "n_timelines": len(timelines),
    }))
    print(f"{len(timelines)} group timelines, {sum(t.n_meetings for t in timelines)} meetings")
    return 0


def cmd_route(args) -> int:
    trace = _load_trace(args)
    lookback = int(args.lookback_days * DAY)
    ttl = int(args.ttl_hours * HOUR)
    at = args.at if args.at is not None else trace.span
    cfg = ExperimentConfig(ttl=ttl, lookback=lookback, tw=args.tw, w_th=args.wth,
                           k=args.k, policies=("groupsnet",))
    timelines = build_timelines(trace, cfg)
    recent = recent_groups(timelines, now=at, lookback=lookback, tw=args.tw)
    graph = build_group_graph(recent, lookback, ttl)
    route = most_probable_route(graph, args.origin, args.dest)
    text = route_to_json(route, graph)
    print(text)
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "route.json").write_text(text + "\n")
    return 0


def _experiment_config(args) -> ExperimentConfig:
    policies = tuple(p.strip() for p in args.policies.split(",") if p.strip())
    return ExperimentConfig(
        ttl=int(args.ttl_hours * HOUR),
        n_messages=args.messages,
        n_seeds=args.seeds,
        lookback=int(args.lookback_days * DAY),
        policies=policies,
        tw=args.tw,
        w_th=args.wth,
        k=args.k,
        bubble_whole_trace=args.bubble_whole_trace,
        master_seed=args.seed if args.seed is not None else 0,
    )


def cmd_simulate(args) -> int:
    trace = _load_trace(args)
    cfg = _experiment_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    result = run_experiment(trace, cfg, jobs=args.jobs)
    write_curves_csv(out / "delivery_ratio.csv", result, "delivery_ratio")
    write_curves_csv(out / "transmissions.csv", result, "transmissions")
    write_curves_csv(out / "benefit_cost.csv", result, "benefit_cost")

    extra = {"experiment": cfg.to_json_obj(), "jobs": args.jobs}
    if args.sizes:
        sizes = sorted(int(s) for s in args.sizes.split(","))
        scaling = overhead_scaling(trace, sizes, cfg, jobs=args.jobs)
        write_scaling_csv(out / "scaling.csv", scaling)
        extra["sizes"] = sizes
    _write_json(out / "manifest.json", _manifest(args, trace, extra))

    final = {pol: result.policies[pol].delivery_ratio.final for pol in cfg.policies}
    print(json.dumps({"delivery_ratio_at_ttl": final}, sort_keys=True))
    return 0


def cmd_subset(args) -> int:
    trace = _load_trace(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sizes = sorted(int(s) for s in args.sizes.split(","))
    digests = {}
    for n in sizes:
        sub = snowball_subset(trace, n)
        sub.write_csv(out / f"trace_{n}.csv")
        digests[str(n)] = sub.sha256()
    _write_json(out / "manifest.json", _manifest(args, trace, {"sizes": sizes, "subset_sha256": digests}))
    print(json.dumps({"sizes": sizes}, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="groupsnet",
                                 description="group meeting analytics and forwarding simulation")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="canonicalize a contact CSV")
    p.add_argument("--trace", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(fn=cmd_ingest)

    p = sub.add_parser("synth", help="generate a synthetic trace")
    p.add_argument("--synth-config", type=Path, required=True)
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("groups", help="detect and fit group meetings")
    _add_source_args(p)
    _add_slicing_args(p)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(fn=cmd_groups)

    p = sub.add_parser("route", help="most probable group route for one pair")
    _add_source_args(p)
    _add_slicing_args(p)
    p.add_argument("--origin", type=int, required=True)
    p.add_argument("--dest", type=int, required=True)
    p.add_argument("--at", type=int, default=None,
                   help="query time in trace seconds (default: end of trace)")
    p.add_argument("--lookback-days", type=float, default=21.0)
    p.add_argument("--ttl-hours", type=float, default=168.0)
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(fn=cmd_route)

    p = sub.add_parser("simulate", help="run the forwarding comparison")
    _add_source_args(p)
    _add_slicing_args(p)
    p.add_argument("--ttl-hours", type=float, default=168.0)
    p.add_argument("--lookback-days", type=float, default=21.0)
    p.add_argument("--messages", type=int, default=500)
    p.add_argument("--seeds", type=int, default=8)
    p.add_argument("--policies", default=",".join(KNOWN_POLICIES),
                   help="comma list from: " + ",".join(KNOWN_POLICIES))
    p.add_argument("--sizes", default=None,
                   help="comma list of snowball sizes; adds the scaling study")
    p.add_argument("--bubble-whole-trace", action="store_true",
                   help="train the community baseline on the whole trace instead of each message's lookback")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("subset", help="write snowball subsets of a trace")
    _add_source_args(p)
    p.add_argument("--sizes", required=True, help="comma list of subset sizes")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(fn=cmd_subset)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (TraceFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
