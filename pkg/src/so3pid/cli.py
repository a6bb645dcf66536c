"""Command-line interface.

Subcommands: ``run`` (one scenario, CSV + metrics), ``compare`` (same
scenario under the geometric PID and PD, optionally the Euler-angle
baseline, with an ordering table), ``audit`` (invariant checks on the
configured run) and ``export-ref`` (write the reference trajectory CSV).

Exit codes: 0 success, 2 configuration errors, 3 simulation errors,
4 audit invariant failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import harness, trajectory
from .config import ConfigError, load_config
from .control import EulerSingularity
from .harness import NonFiniteState, ScenarioConfig, SchemaMismatch

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SIM = 3
EXIT_AUDIT = 4

_SIM_ERRORS = (
    trajectory.DegenerateThrust,
    trajectory.LogBranchError,
    EulerSingularity,
    NonFiniteState,
    SchemaMismatch,
)


def _out_paths(cfg: ScenarioConfig, out_dir: str, controller: str):
    base = Path(out_dir) / f"{cfg.name}_{controller}"
    return base.with_suffix(".csv"), Path(str(base) + "_metrics.txt")


def _write_metrics(path, values: dict) -> None:
    lines = [f"{key} = {value:.17g}" for key, value in values.items()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _run_one(cfg: ScenarioConfig, out_dir: str):
    records, diag = harness.run_scenario_with_diagnostics(cfg)
    csv_path, metrics_path = _out_paths(cfg, out_dir, cfg.controller)
    Path(out_dir).mkdir(parents=True, exist_ok=True)
    harness.write_csv(records, csv_path)
    summary = harness.metrics(records)
    summary["max_so3_drift"] = diag.max_orthonormality_err
    summary["final_phi"] = records[-1].phi
    summary["final_principal_angle"] = diag.final_principal_angle
    summary["final_om_norm"] = records[-1].om_norm
    _write_metrics(metrics_path, summary)
    return records, diag, csv_path, metrics_path


def cmd_run(args) -> int:
    cfg = load_config(args.config, overrides=args.set)
    records, _, csv_path, metrics_path = _run_one(cfg, args.out_dir)
    print(f"wrote {csv_path} ({len(records)} records) and {metrics_path}")
    return EXIT_OK


def cmd_compare(args) -> int:
    base = load_config(args.config, overrides=args.set)
    controllers = ["geometric-pid", "geometric-pd"]
    if args.with_classic:
        controllers.append("classic-pid")
    results = {}
    for kind in controllers:
        cfg = replace(base, controller=kind)
        records, _, csv_path, _ = _run_one(cfg, args.out_dir)
        results[kind] = harness.metrics(records)
        print(f"{kind}: wrote {csv_path}")

    keys = ["ss_mean_om", "ss_max_om", "ss_mean_phi", "effort", "peak_tau"]
    width = max(len(k) for k in keys) + 2
    header = "metric".ljust(width) + "".join(k.rjust(16) for k in controllers)
    table = [header]
    for key in keys:
        row = key.ljust(width)
        for kind in controllers:
            row += f"{results[kind][key]:16.6g}"
        table.append(row)
    pid, pd = results["geometric-pid"], results["geometric-pd"]
    checks = [
        ("ss_mean_om(pid) < ss_mean_om(pd)",
         pid["ss_mean_om"] < pd["ss_mean_om"]),
        ("effort(pid) < effort(pd)", pid["effort"] < pd["effort"]),
    ]
    for label, ok in checks:
        table.append(f"{label}: {'PASS' if ok else 'FAIL'}")
    text = "\n".join(table)
    print(text)
    out = Path(args.out_dir) / f"{base.name}_compare.txt"
    out.write_text(text + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_audit(args) -> int:
    cfg = load_config(args.config, overrides=args.set)
    records, diag = harness.run_scenario_with_diagnostics(cfg)
    failures = 0

    def report(name: str, ok, detail: str) -> None:
        nonlocal failures
        if ok is None:
            print(f"[n/a ] {name}: {detail}")
            return
        print(f"[{'pass' if ok else 'FAIL'}] {name}: {detail}")
        failures += 0 if ok else 1

    report("so3-integrity", diag.max_orthonormality_err <= 1e-9
           and diag.max_det_err <= 1e-9,
           f"max |R^T R - I| = {diag.max_orthonormality_err:.3e}, "
           f"max |det R - 1| = {diag.max_det_err:.3e}")

    undisturbed = cfg.disturbance is None or cfg.disturbance.gamma() == 0.0
    if cfg.controller == "geometric-pid" and undisturbed:
        v = np.array([r.V for r in records])
        dv_max = float((v[1:] - v[:-1]).max()) if len(v) > 1 else 0.0
        slack = 1e-3 * cfg.h
        report("lyapunov-decrease", dv_max <= slack,
               f"max per-step increase {dv_max:.3e} (slack {slack:.1e})")
        if cfg.duration >= 30.0:
            report("lyapunov-convergence", v[-1] < 1e-6,
                   f"final V = {v[-1]:.3e}")
    else:
        report("lyapunov-decrease", None,
               "only checked for the undisturbed geometric PID")

    if not undisturbed:
        half = records[len(records) // 2:]
        sup_om = max(r.om_norm for r in half)
        frac = float(np.mean([r.in_nbhd for r in half]))
        report("disturbed-boundedness",
               math.isfinite(sup_om) and sup_om < 10.0,
               f"sup |omega| over final half = {sup_om:.3e}, "
               f"neighborhood membership {100 * frac:.1f}% of steps")

    if failures:
        print(f"{failures} invariant check(s) failed")
        return EXIT_AUDIT
    print("all applicable invariants passed")
    return EXIT_OK


def cmd_export_ref(args) -> int:
    cfg = load_config(args.config, overrides=args.set)
    samples, r_seq, om, om_dot = harness.build_reference(cfg)
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    trajectory.write_reference_csv(out, samples, r_seq, om, om_dot)
    print(f"wrote {out} ({len(samples)} samples)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="so3pid",
        description="Rigid-body attitude tracking scenarios on SO(3)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("config", help="scenario configuration file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a configuration key (repeatable)")

    p_run = sub.add_parser("run", help="run one scenario, write CSV + metrics")
    add_common(p_run)
    p_run.add_argument("-o", "--out-dir", default=".", help="output directory")
    p_run.set_defaults(func=cmd_run)

    p_cmp = sub.add_parser(
        "compare", help="run the scenario under PID and PD controllers")
    add_common(p_cmp)
    p_cmp.add_argument("-o", "--out-dir", default=".")
    p_cmp.add_argument("--with-classic", action="store_true",
                       help="also run the Euler-angle PID baseline")
    p_cmp.set_defaults(func=cmd_compare)

    p_aud = sub.add_parser("audit", help="check run invariants")
    add_common(p_aud)
    p_aud.set_defaults(func=cmd_audit)

    p_ref = sub.add_parser(
        "export-ref", help="write the reference trajectory CSV")
    add_common(p_ref)
    p_ref.add_argument("-o", "--output", default="reference.csv")
    p_ref.set_defaults(func=cmd_export_ref)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _SIM_ERRORS as exc:
        step = getattr(exc, "step", None)
        where = f" (step {step})" if step is not None else ""
        print(f"simulation error: {type(exc).__name__}: {exc}{where}",
              file=sys.stderr)
        return EXIT_SIM
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_SIM


if __name__ == "__main__":
    sys.exit(main())
