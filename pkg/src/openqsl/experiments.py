"""Runners that turn model parameters into BoundReports: the JC sweep and the dot ensemble."""

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from typing import Optional

import numpy as np

from . import dot, jc, qsl
from .errors import DegenerateEvolutionError

SWEEP_POINTS = 120
SWEEP_RANGE = (0.05, 50.0)
# relative slack for bounds that are exact up to quadrature error on the grid
GRID_RTOL = 1e-4

# reference values for the dot model at N1 = N2 = 500, delta_eps = 0.5, coupling 0.02, tau = 8
REFERENCE = {
    "excited": {"theta_r": 0.7707, "tau_hat": 2.0, "bound_previous": 5.1757,
                "bound_beta_1": 1.4421, "bound_beta_q": 1.9905},
    "coherent": {"theta_r": 0.7832, "tau_hat": 0.2, "bound_previous": 1.0242,
                 "bound_beta_1": 0.1130, "bound_beta_q": 0.1196},
}


def sweep_grid(points=SWEEP_POINTS, lo=SWEEP_RANGE[0], hi=SWEEP_RANGE[1]):
    return np.geomspace(lo, hi, points)


def jc_report(gamma0, lam=1.0, tau=10.0, beta=qsl.BETA_OSCILLATOR, omega0=1.0,
              n_steps=None, norm_flavor="op", blp_window=None):
    """BoundReport for the excited-state damped Jaynes-Cummings run at one coupling."""
    params = jc.JCParams(gamma0, lam, omega0)
    traj = jc.jc_trajectory(jc.excited_state(), params, tau, n_steps)
    n = qsl.blp_non_markovianity(params, blp_window)
    return qsl.analyze(traj, tau, beta, norm_flavor, non_markovianity=n)


def _jc_row(args):
    gamma0, kwargs = args
    return jc_report(gamma0, **kwargs)


def jc_sweep(gammas, jobs=1, **kwargs):
    """Reports for every gamma0, in grid order whatever the worker count."""
    work = [(float(g), kwargs) for g in gammas]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_jc_row, work))
    return [_jc_row(w) for w in work]


def with_spread(traj, value):
    """Same trajectory with every non-zero Hamiltonian spread replaced by `value`."""
    spreads = np.where(traj.hamiltonian_spreads > 0, value, 0.0)
    return dataclasses.replace(traj, hamiltonian_spreads=spreads)


@dataclasses.dataclass
class DotRun:
    seed: int
    kind: str
    times: np.ndarray
    theta_r: np.ndarray
    dissipator_opnorms: np.ndarray
    # convention -> beta -> bound value; empty when report is None
    bounds: dict
    # None when the state never moves
    report: Optional[qsl.BoundReport]
    norm_drift: float
    energy_drift: float


def dot_run(params, kind="excited", tau=8.0, n_steps=1600, betas=(1.0, qsl.BETA_QUARTER),
            norm_flavor="op"):
    """Simulate one seed and evaluate the bounds under both spread conventions."""
    traj = dot.dot_trajectory(params, kind, tau, n_steps)
    try:
        report = qsl.analyze(traj, tau, betas[-1], norm_flavor)
    except DegenerateEvolutionError:
        # nothing moves (zero coupling): keep the flat curves, leave the bounds undefined
        report = None
    bounds = {}
    for convention in ("half", "full") if report is not None else ():
        tr = with_spread(traj, dot.spread_value(params, convention))
        bounds[convention] = {b: qsl.bound_final2(tr, report.tau_hat, report.theta_r, b) for b in betas}
    return DotRun(params.seed, kind, traj.times, qsl.theta_r_of_t(traj), traj.dissipator_opnorms,
                  bounds, report, traj.meta["norm_drift"], traj.meta["energy_drift"])


def _dot_job(args):
    params, kwargs = args
    return dot_run(params, **kwargs)


def dot_ensemble(base, seeds, jobs=1, **kwargs):
    work = [(dataclasses.replace(base, seed=int(s)), kwargs) for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_dot_job, work))
    return [_dot_job(w) for w in work]


def ensemble_summary(runs, convention):
    """Mean and sample standard deviation of the headline quantities over runs that moved."""
    runs = [r for r in runs if r.report is not None]
    if not runs:
        return {}
    betas = list(runs[0].bounds[convention])
    cols = {
        "theta_r": [r.report.theta_r for r in runs],
        "tau_hat": [r.report.tau_hat for r in runs],
        "bound_previous": [r.report.bound_previous for r in runs],
        "beta_estimate": [r.report.beta for r in runs],
    }
    for b in betas:
        cols[f"bound_beta={b:.4g}"] = [r.bounds[convention][b] for r in runs]
    ddof = 1 if len(runs) > 1 else 0
    return {k: (float(np.mean(v)), float(np.std(v, ddof=ddof))) for k, v in cols.items()}


def closest_convention(runs, kind):
    """Convention whose mean beta bounds sit closest (relative error) to the reference."""
    ref = REFERENCE[kind]
    runs = [r for r in runs if r.report is not None]
    if not runs:
        return None, {}
    scores = {}
    for convention in ("half", "full"):
        betas = list(runs[0].bounds[convention])
        mean1 = np.mean([r.bounds[convention][betas[0]] for r in runs])
        meanq = np.mean([r.bounds[convention][betas[-1]] for r in runs])
        scores[convention] = abs(mean1 / ref["bound_beta_1"] - 1) + abs(meanq / ref["bound_beta_q"] - 1)
    return min(scores, key=scores.get), scores
