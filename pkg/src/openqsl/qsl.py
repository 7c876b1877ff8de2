"""Minimal evolution times, speed-limit bounds and non-Markovianity.

All bounds take hbar = 1. Time averages <A>_tau = (1/tau) int_0^tau A dt use
the trapezoidal rule on the stored grid, with the last partial interval
linearly interpolated when tau falls between nodes.
"""

from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np

from . import jc, linalg
from .errors import (
    DegenerateEvolutionError,
    DomainError,
    InapplicableBoundError,
    UnattainedTargetError,
)
from .fidelity import SNAP, bures_fidelity, relative_purity_angle_series

BETA_OSCILLATOR = 2 / np.pi
# average of |sin| over a half period started a quarter period late
BETA_QUARTER = (1 + np.cos(np.pi / 4)) / (np.pi / 2 + np.pi / 4)
PURE_TOL = 1e-6
# generator norms at or below this are round-off: the state does not move
STILL_TOL = 1e-12


@dataclass(frozen=True)
class TimeSet:
    crossing_times: tuple

    def __len__(self):
        return len(self.crossing_times)

    @property
    def minimum(self):
        return self.crossing_times[0]


@dataclass(frozen=True)
class BoundReport:
    theta_r: float
    tau_driving: float
    tau_hat: float
    tau_hat_m: Optional[float]
    bound_final1: float
    bound_max: float
    bound_max_tau_window: float
    bound_beta: float
    beta_used: float
    beta: float
    bound_previous: Optional[float]
    non_markovianity: Optional[float] = None

    def as_dict(self):
        return asdict(self)


def _fidelity_squared(traj):
    r0 = traj.rho0
    return np.einsum("ij,tji->t", r0, traj.states).real / linalg.hs_norm(r0)


def theta_r_of_t(traj):
    return relative_purity_angle_series(traj.states, traj.rho0)


def theta_at(traj, tau):
    """Theta_R at an arbitrary time, interpolating F_R^2 (linear in the state)."""
    _check_window(traj, tau)
    f = np.sqrt(np.clip(np.interp(tau, traj.times, _fidelity_squared(traj)), 0.0, 1.0))
    return float(np.arccos(1.0 if f > 1.0 - SNAP else f))


def _check_window(traj, tau):
    if not (0 <= tau <= traj.times[-1] + 1e-12):
        raise DomainError(f"tau={tau} outside trajectory window [0, {traj.times[-1]}]")


def _fidelity_squared_rate(traj):
    """Exact d F_R^2 / dt from the stored generator."""
    r0 = traj.rho0
    return np.einsum("ij,tji->t", r0, traj.generators).real / linalg.hs_norm(r0)


def _hermite(t, f, df, k):
    """Cubic Hermite interpolant of f on [t_k, t_k+1] as polynomial coefficients in s in [0, 1]."""
    h = t[k + 1] - t[k]
    f0, f1, m0, m1 = f[k], f[k + 1], h * df[k], h * df[k + 1]
    return np.array([2 * f0 + m0 - 2 * f1 + m1, -3 * f0 - 2 * m0 + 3 * f1 - m1, m0, f0])


def _unit_roots(coeffs):
    return sorted(r.real for r in np.roots(coeffs) if abs(r.imag) < 1e-9 and -1e-12 <= r.real <= 1 + 1e-12)


def _local_minima(t, f, df):
    """(time, value, interval) of every local minimum of the Hermite interpolant.

    Interior minima sit where df turns from negative to non-negative; the
    window ends count when the curve rises away from (or falls into) them.
    ``interval`` is None for the two ends.
    """
    n = len(f)
    if n == 1:
        return [(float(t[0]), float(f[0]), None)]
    out = []
    if df[0] >= 0:
        out.append((float(t[0]), float(f[0]), None))
    for k in np.nonzero((df[:-1] < 0) & (df[1:] >= 0))[0]:
        c = _hermite(t, f, df, k)
        cands = [0.0, 1.0] + _unit_roots(np.polyder(c))
        s = min(cands, key=lambda x: np.polyval(c, x))
        out.append((float(t[k] + s * (t[k + 1] - t[k])), float(np.polyval(c, s)), int(k)))
    if df[-1] <= 0:
        out.append((float(t[-1]), float(f[-1]), None))
    if not out:
        i = int(np.argmin(f))
        out.append((float(t[i]), float(f[i]), None))
    return out


def minimal_evolution_time(traj, target_theta):
    """Every time at which Theta_R equals the target, and the earliest of them.

    Works on F_R^2 against cos^2(target), interpolated between samples with
    cubic Hermite polynomials built from the exact derivative. That also
    catches crossings hidden between two samples, as happens at the cusps of
    Theta_R when the target sits just under pi/2.
    """
    if target_theta < 0:
        raise DomainError("target angle must be non-negative")
    t = traj.times
    level = np.cos(target_theta) ** 2
    f = _fidelity_squared(traj) - level
    df = _fidelity_squared_rate(traj)
    minima = _local_minima(t, f, df)
    lowest = min(v for _, v, _ in minima)
    if lowest > 1e-12:
        theta_max = float(np.arccos(np.sqrt(np.clip(level + lowest, 0.0, 1.0))))
        raise UnattainedTargetError(target_theta, theta_max)
    # nodes on the level up to round-off (the driving time itself, usually)
    hits = list(t[np.abs(f) <= 1e-14])
    intervals = set(np.nonzero(f[:-1] * f[1:] < 0)[0].tolist())
    intervals.update(k for _, v, k in minima if k is not None and v <= 0)
    for k in sorted(intervals):
        h = t[k + 1] - t[k]
        hits.extend(t[k] + s * h for s in _unit_roots(_hermite(t, f, df, k)))
    if not hits:
        # the level only touches the curve, to round-off
        hits = [min(minima, key=lambda m: m[1])[0]]
    crossings = []
    for h in sorted(float(h) for h in hits):
        if not crossings or h - crossings[-1] > 1e-12 * max(1.0, h):
            crossings.append(h)
    crossings = tuple(crossings)
    return TimeSet(crossings), crossings[0]


def _parabola_vertex(t, y, i):
    """Vertex (time, value) of the parabola through samples i-1, i, i+1."""
    x = t[i - 1:i + 2] - t[i]
    a, b, c = np.polyfit(x, y[i - 1:i + 2], 2)
    if a == 0:
        return t[i], y[i]
    xv = np.clip(-b / (2 * a), x[0], x[2])
    return t[i] + xv, a * xv**2 + b * xv + c


def tau_hat_m(traj):
    """Earliest time of maximal Theta_R, or None while the angle still grows at the window end.

    Works on F_R^2, which is smooth where Theta_R has a cusp, with minima
    located on the Hermite interpolant. The earliest minimum within 1e-4 of
    the F_R^2 range above the global minimum wins, so repeated orthogonal
    points resolve to the first.
    """
    f2 = _fidelity_squared(traj)
    df = _fidelity_squared_rate(traj)
    minima = _local_minima(traj.times, f2, df)
    lowest = min(v for _, v, _ in minima)
    tol = max(1e-4 * (f2.max() - f2.min()), 1e-12)
    for tv, v, k in minima:
        if v <= lowest + tol:
            if k is None and tv == traj.times[-1] and len(f2) > 1 and df[-1] < 0:
                return None
            return tv
    raise AssertionError("unreachable")


def time_average(times, values, tau):
    if not tau > 0:
        raise DegenerateEvolutionError("time average over an empty window")
    times = np.asarray(times)
    values = np.asarray(values, dtype=float)
    k = int(np.searchsorted(times, tau, side="right"))
    total = np.trapezoid(values[:k], times[:k]) if k > 1 else 0.0
    if k < len(times) and tau > times[k - 1]:
        v_tau = np.interp(tau, times, values)
        total += 0.5 * (values[k - 1] + v_tau) * (tau - times[k - 1])
    return float(total / tau)


def max_dissipator_norm(traj):
    """max_t |D_t(rho_t)|_op over the full window, parabola-refined at the discrete argmax."""
    y = np.asarray(traj.dissipator_opnorms)
    i = int(np.argmax(y))
    if 0 < i < len(y) - 1:
        _, v = _parabola_vertex(traj.times, y, i)
        return float(max(v, y[i]))
    return float(y[i])


def _numerator(traj, theta):
    return float(linalg.hs_norm(traj.rho0)) * np.sin(theta) ** 2


def _ratio(num, den):
    if den <= 0:
        raise DegenerateEvolutionError("speed-limit denominator vanishes: no dynamics")
    return float(num / den)


def bound_final1(traj, tau, theta):
    """Bound on the driving time from averages over [0, tau]."""
    _check_window(traj, tau)
    den = 0.5 * time_average(traj.times, traj.hamiltonian_spreads, tau) + time_average(
        traj.times, traj.dissipator_opnorms, tau
    )
    return _ratio(_numerator(traj, theta), den)


def bound_final2(traj, tau_hat_window, theta, beta=1.0):
    """Bound on the minimal evolution time with the dissipator average replaced by beta * max."""
    if not 0 < beta <= 1:
        raise DomainError(f"beta must lie in (0, 1], got {beta}")
    _check_window(traj, tau_hat_window)
    h = time_average(traj.times, traj.hamiltonian_spreads, tau_hat_window) if tau_hat_window > 0 else float(
        traj.hamiltonian_spreads[0]
    )
    den = 0.5 * h + beta * max_dissipator_norm(traj)
    return _ratio(_numerator(traj, theta), den)


def beta_estimate(traj, tau_hat):
    """<|D_t|_op>_tau_hat / max_t |D_t|_op, clamped to (0, 1]."""
    peak = max_dissipator_norm(traj)
    if peak <= 0:
        raise DegenerateEvolutionError("dissipator vanishes identically")
    _check_window(traj, tau_hat)
    b = time_average(traj.times, traj.dissipator_opnorms, tau_hat) / peak
    return float(min(max(b, np.finfo(float).tiny), 1.0))


def _state_at(traj, tau):
    t = traj.times
    k = int(np.clip(np.searchsorted(t, tau), 1, len(t) - 1))
    w = (tau - t[k - 1]) / (t[k] - t[k - 1])
    return (1 - w) * traj.states[k - 1] + w * traj.states[k]


def bound_previous(traj, tau, norm_flavor="op"):
    """Pure-state comparison bound sin^2(Theta_B) / <|L_t(rho_t)|>_tau.

    L_t is the full generator (Hamiltonian plus dissipator); ``norm_flavor``
    picks the operator, trace or Hilbert-Schmidt norm.
    """
    _check_window(traj, tau)
    if np.linalg.eigvalsh(traj.rho0)[-1] < 1 - PURE_TOL:
        raise InapplicableBoundError("comparison bound needs a pure initial state")
    norm = linalg.NORM_FLAVORS[norm_flavor]
    angle = bures_fidelity(traj.rho0, _state_at(traj, tau)).angle
    den = time_average(traj.times, norm(traj.generators), tau)
    return _ratio(np.sin(angle) ** 2, den)


def blp_non_markovianity(params, t_window=None):
    """Backflow of distinguishability for the damped Jaynes-Cummings qubit.

    Uses the excited/ground pair, whose trace distance is |G(t)|^2. Every
    revival climbs from a zero of G to a peak |G|^2 = exp(-lambda t) at
    t = 2 pi k / D, so N is the sum of those peaks (plus a partial climb when
    the window closes mid-revival). ``t_window=None`` sums all revivals in
    closed form.
    """
    if params.regime != "strong":
        return 0.0
    d = jc.big_d(params).real
    lam = params.lam
    if t_window is None:
        return float(1.0 / np.expm1(2 * np.pi * lam / d))
    zeros = jc.g_zeros(params, t_window)
    total = 0.0
    for z in zeros:
        k = round((z * d / 2 + np.arctan(d / lam)) / np.pi)
        peak = 2 * np.pi * k / d
        if peak <= t_window:
            total += np.exp(-lam * peak)
        else:
            total += jc.g_amplitude(t_window, params) ** 2
    return float(total)


def analyze(traj, tau=None, beta=BETA_OSCILLATOR, norm_flavor="op", non_markovianity=None):
    """Every quantity of a BoundReport for one trajectory and driving time.

    Raises DegenerateEvolutionError for a trajectory that never moves, where
    every bound is 0/0.
    """
    tau = traj.t_final if tau is None else float(tau)
    if np.max(linalg.operator_norm(traj.generators)) <= STILL_TOL:
        raise DegenerateEvolutionError("the state does not evolve; speed-limit bounds are undefined")
    theta = theta_at(traj, tau)
    _, t_hat = minimal_evolution_time(traj, theta)
    try:
        previous = bound_previous(traj, tau, norm_flavor)
    except InapplicableBoundError:
        previous = None
    return BoundReport(
        theta_r=theta,
        tau_driving=tau,
        tau_hat=t_hat,
        tau_hat_m=tau_hat_m(traj),
        bound_final1=bound_final1(traj, tau, theta),
        bound_max=bound_final2(traj, t_hat, theta, 1.0),
        bound_max_tau_window=bound_final2(traj, tau, theta, 1.0),
        bound_beta=bound_final2(traj, t_hat, theta, beta),
        beta_used=float(beta),
        beta=beta_estimate(traj, t_hat) if t_hat > 0 else 1.0,
        bound_previous=previous,
        non_markovianity=non_markovianity,
    )
