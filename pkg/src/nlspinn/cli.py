"""Command-line entry points: train, verify, sweep, plot, oracle."""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from . import harness, network
from .config import RunConfig, parse_config_file


def _load_config(args):
    cfg = parse_config_file(args.config)
    if getattr(args, "seed", None) is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    if getattr(args, "out", None) is not None:
        cfg = dataclasses.replace(cfg, out=args.out)
    return cfg


def _cmd_train(args):
    cfg = _load_config(args)
    if cfg.out is None:
        cfg = dataclasses.replace(cfg, out="run_output")
    report = harness.train(cfg)
    final = report.final_errors
    print(
        f"finished {len(report.iterations)} iterations in {report.elapsed_seconds:.1f}s; "
        f"loss {report.iterations[-1]['loss']:.3e}, "
        f"error_Sprime {final['error_Sprime']:.3e}, outputs in {cfg.out}"
    )
    return 0


def _cmd_verify(args):
    from . import verification

    results = verification.run_all(quick=args.quick)
    for result in results:
        print(result.line())
    return 0 if all(r.passed for r in results) else 1


def _cmd_sweep(args):
    cfg = _load_config(args)
    parameter, _, raw = args.vary.partition("=")
    parameter = parameter.strip()
    if not raw:
        print("expected --vary name=v1,v2,...", file=sys.stderr)
        return 2
    field_types = {f.name: f.type for f in dataclasses.fields(RunConfig)}
    if parameter not in field_types:
        print(f"unknown config field {parameter!r}", file=sys.stderr)
        return 2
    caster = int if field_types[parameter].startswith("int") else float
    values = [caster(v) for v in raw.split(",") if v.strip()]
    out = cfg.out or "sweep_output"
    results = harness.sweep(cfg, parameter, values, out_dir=out)
    for value, report, failure in results:
        if report is None:
            print(f"{parameter}={value}: FAILED ({failure})")
        else:
            print(
                f"{parameter}={value}: error_Sprime {report.final_errors['error_Sprime']:.3e} "
                f"in {report.elapsed_seconds:.1f}s"
            )
    print(f"aggregate table: {os.path.join(out, 'sweep.csv')}")
    return 0


def _cmd_plot(args):
    with open(args.report) as fh:
        payload = json.load(fh)
    run_dir = os.path.dirname(os.path.abspath(args.report))
    cfg_fields = {k: v for k, v in payload["config"].items()}
    cfg_fields["milestones"] = tuple(cfg_fields.get("milestones") or ())
    slices = cfg_fields.get("slice_times")
    cfg_fields["slice_times"] = tuple(slices) if slices else None
    cfg = RunConfig(**cfg_fields)
    params, _ = network.load_checkpoint(
        os.path.join(run_dir, "checkpoint.bin"), os.path.join(run_dir, "checkpoint.json")
    )
    report = harness.RunReport(config=payload["config"], seed=payload["seed"])
    report.iterations = payload["iterations"]
    harness.emit_plots(report, params, cfg, run_dir)
    print(f"slice/qsweep tables and plot.py refreshed in {run_dir}")
    return 0


def _cmd_oracle(args):
    cfg = _load_config(args)
    params = None
    if args.checkpoint:
        sidecar = args.checkpoint.replace(".bin", ".json")
        params, _ = network.load_checkpoint(args.checkpoint, sidecar)
    result = harness.oracle_comparison(cfg, params)
    print(f"split-step vs closed form: {result['oracle_vs_exact']:.3e}")
    if params is not None:
        print(f"network vs split-step:    {result['network_vs_oracle']:.3e}")
        print(f"network vs closed form:   {result['network_vs_exact']:.3e}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="nlspinn", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train a network from a config file")
    p_train.add_argument("--config", required=True)
    p_train.add_argument("--seed", type=int, default=None)
    p_train.add_argument("--out", default=None)
    p_train.set_defaults(func=_cmd_train)

    p_verify = sub.add_parser("verify", help="run the deterministic property suites")
    p_verify.add_argument("--quick", action="store_true", help="fewer random draws")
    p_verify.set_defaults(func=_cmd_verify)

    p_sweep = sub.add_parser("sweep", help="train over a list of parameter values")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--vary", required=True, metavar="param=v1,v2,...")
    p_sweep.add_argument("--seed", type=int, default=None)
    p_sweep.add_argument("--out", default=None)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_plot = sub.add_parser("plot", help="re-emit slice/qsweep tables for a report")
    p_plot.add_argument("--report", required=True)
    p_plot.set_defaults(func=_cmd_plot)

    p_oracle = sub.add_parser("oracle", help="split-step comparison for a config")
    p_oracle.add_argument("--config", required=True)
    p_oracle.add_argument("--checkpoint", default=None)
    p_oracle.add_argument("--seed", type=int, default=None)
    p_oracle.set_defaults(func=_cmd_oracle)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
