"""openqsl command line: jc-sweep, jc-trajectory, dot-run, ineq-check.

Exit codes: 0 success, 2 configuration error, 3 numerical contract violation.
"""

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import dot, experiments, io, jc, qsl
from .config import RunConfig
from .errors import (
    ConfigurationError,
    ContractViolation,
    DomainError,
    GammaSingularityError,
    InapplicableBoundError,
    UnattainedTargetError,
)
from .inequalities import run_campaign
from .linalg import NORM_FLAVORS

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

SWEEP_HEADER = [
    "gamma0", "lambda", "tau", "theta_r", "tau_hat", "tau_hat_m", "bound_previous",
    "bound_max", "bound_beta", "beta", "non_markovianity",
]
TRAJECTORY_HEADER = ["t", "rho11", "theta_r", "dissipator_opnorm", "gamma_rate"]
DOT_HEADER = ["seed", "t", "theta_r", "dissipator_opnorm"]


class NumericalContractError(ContractViolation):
    """A computed value breaks an invariant it must satisfy."""


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--out", help="output directory")
    common.add_argument("--jobs", type=int, help="worker processes")
    common.add_argument("--seed", type=int, help="random seed (dot-run: first seed)")
    common.add_argument("--beta", type=_float_list, help="comma-separated beta values")
    common.add_argument("--norm-flavor", choices=sorted(NORM_FLAVORS))
    common.add_argument("--h-spread", choices=["full", "half"])

    parser = argparse.ArgumentParser(prog="openqsl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("jc-sweep", parents=[common], help="bounds over a gamma0 grid")
    p.add_argument("--lam", type=float)
    p.add_argument("--tau", type=float)
    p.add_argument("--gamma", type=_float_list, help="explicit comma-separated gamma0 grid")
    p.add_argument("--points", type=int)
    p.add_argument("--gamma-min", type=float)
    p.add_argument("--gamma-max", type=float)

    p = sub.add_parser("jc-trajectory", parents=[common], help="one Jaynes-Cummings run")
    p.add_argument("--gamma0", type=float)
    p.add_argument("--lam", type=float)
    p.add_argument("--tau", type=float)
    p.add_argument("--n-steps", type=int)

    p = sub.add_parser("dot-run", parents=[common], help="spin-dot ensemble")
    p.add_argument("--kind", choices=["excited", "coherent"])
    p.add_argument("--n-seeds", type=int)
    p.add_argument("--n1", type=int)
    p.add_argument("--n2", type=int)
    p.add_argument("--delta-e", type=float)
    p.add_argument("--coupling", type=float)
    p.add_argument("--tau", type=float)
    p.add_argument("--n-steps", type=int)

    p = sub.add_parser("ineq-check", parents=[common], help="randomised inequality campaign")
    p.add_argument("--trials", type=int)
    p.add_argument("--max-dim", type=int)
    return parser


def resolve_config(args):
    """Defaults, then the config file, then command-line flags."""
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    for flag, attr in (("out", "out"), ("jobs", "jobs"), ("norm_flavor", "norm_flavor"), ("h_spread", "h_spread")):
        if getattr(args, flag) is not None:
            setattr(cfg, attr, getattr(args, flag))
    cmd = args.command
    if cmd in ("jc-sweep", "jc-trajectory"):
        _override(cfg.jc, args, {"lam": "lam", "tau": "tau"})
        if cmd == "jc-sweep":
            _override(cfg.jc, args, {"points": "points", "gamma_min": "gamma_min", "gamma_max": "gamma_max",
                                     "gamma": "gammas"})
        else:
            _override(cfg.jc, args, {"gamma0": "gamma0", "n_steps": "n_steps"})
        if args.beta is not None:
            if len(args.beta) != 1:
                raise ConfigurationError("the Jaynes-Cummings commands take a single --beta value")
            cfg.jc.beta = args.beta[0]
    elif cmd == "dot-run":
        _override(cfg.dot, args, {"kind": "kind", "n1": "n1", "n2": "n2", "delta_e": "delta_e",
                                  "coupling": "coupling", "tau": "tau", "n_steps": "n_steps"})
        if args.beta is not None:
            cfg.dot.betas = args.beta
        if args.n_seeds is not None:
            if args.n_seeds < 1:
                raise ConfigurationError("--n-seeds must be >= 1")
            start = args.seed if args.seed is not None else 0
            cfg.dot.seeds = list(range(start, start + args.n_seeds))
        elif args.seed is not None:
            cfg.dot.seeds = [args.seed]
    elif cmd == "ineq-check":
        _override(cfg.ineq, args, {"trials": "trials", "max_dim": "max_dim", "seed": "seed"})
    return cfg.validate()


def _override(block, args, mapping):
    for flag, attr in mapping.items():
        value = getattr(args, flag, None)
        if value is not None:
            setattr(block, attr, value)


def _check_bound(name, value, limit, row_label):
    if value is None:
        return
    if value > limit * (1 + experiments.GRID_RTOL) + 1e-9:
        raise NumericalContractError(f"{name}={value:.9g} exceeds {limit:.9g} at {row_label}")


def sweep_rows(cfg, reports, gammas):
    """CSV rows for the sweep, re-checking bound validity on the way out."""
    rows = []
    for g, rep in zip(gammas, reports):
        label = f"gamma0={g:.9g}"
        _check_bound("bound_max", rep.bound_max, rep.tau_hat, label)
        _check_bound("bound_previous", rep.bound_previous, rep.tau_driving, label)
        rows.append([g, cfg.jc.lam, cfg.jc.tau, rep.theta_r, rep.tau_hat, rep.tau_hat_m, rep.bound_previous,
                     rep.bound_max, rep.bound_beta, rep.beta, rep.non_markovianity])
    return rows


def cmd_jc_sweep(cfg):
    out = io.ensure_dir(cfg.out)
    gammas = cfg.jc.grid()
    reports = experiments.jc_sweep(
        gammas, jobs=cfg.jobs, lam=cfg.jc.lam, tau=cfg.jc.tau, beta=cfg.jc.beta, omega0=cfg.jc.omega0,
        n_steps=cfg.jc.n_steps, norm_flavor=cfg.norm_flavor, blp_window=cfg.jc.blp_window,
    )
    rows = sweep_rows(cfg, reports, gammas)
    io.write_csv(out / "jc_sweep.csv", SWEEP_HEADER, rows)
    io.write_text(out / "config.json", cfg.to_json())
    col = {h: [r[i] for r in rows] for i, h in enumerate(SWEEP_HEADER)}
    io.svg_plot(
        out / "jc_sweep.svg", gammas,
        {"tau_hat": col["tau_hat"], "bound_previous": col["bound_previous"], "bound (beta=1)": col["bound_max"],
         f"bound (beta={cfg.jc.beta:.3g})": col["bound_beta"], "N": col["non_markovianity"]},
        "gamma0", "time / N", logx=True,
    )
    return [out / "jc_sweep.csv", out / "jc_sweep.svg"]


def trajectory_rows(traj, params):
    theta = qsl.theta_r_of_t(traj)
    rows = []
    for t, rho, th, dn in zip(traj.times, traj.states, theta, traj.dissipator_opnorms):
        try:
            rate = jc.gamma_rate(float(t), params)
        except GammaSingularityError:
            rate = None
        rows.append([t, rho[0, 0].real, th, dn, rate])
    return rows


def cmd_jc_trajectory(cfg):
    out = io.ensure_dir(cfg.out)
    try:
        params = jc.JCParams(cfg.jc.gamma0, cfg.jc.lam, cfg.jc.omega0)
    except ContractViolation as exc:
        raise ConfigurationError(str(exc)) from exc
    traj = jc.jc_trajectory(jc.excited_state(), params, cfg.jc.tau, cfg.jc.n_steps)
    rows = trajectory_rows(traj, params)
    io.write_csv(out / "jc_trajectory.csv", TRAJECTORY_HEADER, rows)
    zeros = jc.g_zeros(params, cfg.jc.tau)
    t_m = qsl.tau_hat_m(traj)
    markers = {
        "gamma0": params.gamma0,
        "lambda": params.lam,
        "regime": params.regime,
        # first time the excited population returns to zero, from the sampled curve
        "rho11_zero_time": t_m if zeros.size else None,
        "rho11_zeros_closed_form": [float(z) for z in zeros],
        "rho11_monotone": bool(np.all(np.diff([r[1] for r in rows]) <= 1e-15)),
    }
    io.write_text(out / "jc_trajectory_markers.json", json.dumps(markers, indent=2) + "\n")
    io.write_text(out / "config.json", cfg.to_json())
    io.svg_plot(out / "jc_trajectory.svg", traj.times, {"rho11": [r[1] for r in rows], "theta_r": [r[2] for r in rows]},
                "t", "value", title=f"gamma0={params.gamma0:g}, lambda={params.lam:g}")
    return [out / "jc_trajectory.csv", out / "jc_trajectory_markers.json"]


def _dot_params(cfg):
    d = cfg.dot
    try:
        return dot.DotParams(d.n1, d.n2, d.delta_eps, d.delta_e, d.coupling, d.seeds[0], d.initial_level, d.spin_term)
    except ContractViolation as exc:
        raise ConfigurationError(str(exc)) from exc


def dot_report_text(cfg, runs, elapsed=None):
    d = cfg.dot
    primary = cfg.h_spread or "half"
    betas = list(d.betas)
    lines = [
        f"dot model kind={d.kind} n1={d.n1} n2={d.n2} delta_eps={d.delta_eps:g} delta_e={d.delta_e:g} "
        f"coupling={d.coupling:g} spin_term={d.spin_term} tau={d.tau:g} n_steps={d.n_steps}",
        f"norm_flavor={cfg.norm_flavor} h_spread={primary}",
        "",
        "seed  theta_r      tau_hat      tau_hat_m    bound_previous  "
        + " ".join(f"bound(b={b:.4g})".ljust(13) for b in betas)
        + " beta_est     bound_max[0,tau]  norm_drift",
    ]
    for r in runs:
        rep = r.report
        if rep is None:
            lines.append(f"{r.seed:<4d} {io.fmt(float(r.theta_r[-1])).ljust(12)} no dynamics: bounds undefined")
            continue
        cells = [f"{r.seed:<4d}", io.fmt(rep.theta_r).ljust(12), io.fmt(rep.tau_hat).ljust(12),
                 io.fmt(rep.tau_hat_m).ljust(12) if rep.tau_hat_m is not None else "unattained  ",
                 io.fmt(rep.bound_previous).ljust(15)]
        cells += [io.fmt(r.bounds[primary][b]).ljust(13) for b in betas]
        cells += [io.fmt(rep.beta).ljust(12), io.fmt(rep.bound_max_tau_window).ljust(17), f"{r.norm_drift:.2e}"]
        lines.append(" ".join(cells))
    lines.append("")
    for convention in ("half", "full"):
        spread = dot.spread_value(_dot_params(cfg), convention)
        lines.append(f"ensemble mean +- stdev over {len(runs)} seed(s), h_spread={convention} (spread {spread:g}):")
        for key, (mean, std) in experiments.ensemble_summary(runs, convention).items():
            lines.append(f"  {key:<18} {io.fmt(mean):>14} +- {io.fmt(std)}")
    ref = experiments.REFERENCE.get(d.kind)
    if ref and (d.n1, d.n2, d.delta_eps, d.coupling, d.delta_e, d.tau) == (500, 500, 0.5, 0.02, 10.0, 8.0):
        lines.append("")
        lines.append("reference values: " + " ".join(f"{k}={v:g}" for k, v in ref.items()))
        best, scores = experiments.closest_convention(runs, d.kind)
        if best is None:
            lines.append("closest convention: undefined (no run evolved)")
        elif abs(scores["half"] - scores["full"]) < 1e-12:
            lines.append("closest convention: both identical (the Hamiltonian term vanishes on this trajectory)")
        else:
            lines.append(f"closest convention: {best} (summed relative error of the beta bounds: "
                         f"half={scores['half']:.4f}, full={scores['full']:.4f})")
    if elapsed is not None:
        lines.append("")
        lines.append(f"elapsed: {elapsed:.1f} s")
    return "\n".join(lines) + "\n"


def cmd_dot_run(cfg):
    out = io.ensure_dir(cfg.out)
    base = _dot_params(cfg)
    start = time.perf_counter()
    runs = experiments.dot_ensemble(base, cfg.dot.seeds, jobs=cfg.jobs, kind=cfg.dot.kind, tau=cfg.dot.tau,
                                    n_steps=cfg.dot.n_steps, betas=tuple(cfg.dot.betas),
                                    norm_flavor=cfg.norm_flavor)
    for r in runs:
        if r.report is None:
            continue
        _check_bound("bound_max", r.report.bound_max, r.report.tau_hat, f"seed={r.seed}")
    rows = []
    for r in runs:
        rows.extend([r.seed, t, th, dn] for t, th, dn in zip(r.times, r.theta_r, r.dissipator_opnorms))
    stem = f"dot_{cfg.dot.kind}"
    io.write_csv(out / f"{stem}.csv", DOT_HEADER, rows)
    io.write_text(out / f"{stem}_report.txt", dot_report_text(cfg, runs))
    io.write_text(out / "config.json", cfg.to_json())
    times = runs[0].times
    io.svg_plot(out / f"{stem}.svg", times,
                {"theta_r (mean)": np.mean([r.theta_r for r in runs], axis=0),
                 "|D|_op (mean)": np.mean([r.dissipator_opnorms for r in runs], axis=0)},
                "t", "value", title=f"dot model, {cfg.dot.kind} start, {len(runs)} seed(s)")
    print(f"dot-run finished in {time.perf_counter() - start:.1f} s", file=sys.stderr)
    return [out / f"{stem}.csv", out / f"{stem}_report.txt"]


def cmd_ineq_check(cfg):
    out = io.ensure_dir(cfg.out)
    report = run_campaign(cfg.ineq.trials, cfg.ineq.max_dim, cfg.ineq.seed)
    io.write_text(out / "ineq_report.txt", report.format())
    if report.violations:
        raise NumericalContractError(f"{report.violations} inequality violation(s)")
    return [out / "ineq_report.txt"]


COMMANDS = {
    "jc-sweep": cmd_jc_sweep,
    "jc-trajectory": cmd_jc_trajectory,
    "dot-run": cmd_dot_run,
    "ineq-check": cmd_ineq_check,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        written = COMMANDS[args.command](cfg)
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ContractViolation, DomainError, UnattainedTargetError, InapplicableBoundError, ArithmeticError) as exc:
        print(f"numerical contract violation: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    for path in written:
        print(Path(path))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
