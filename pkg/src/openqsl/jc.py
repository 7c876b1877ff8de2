"""Damped Jaynes-Cummings qubit in a leaky cavity, zero temperature, resonant Lorentzian bath.

Basis ordering is (excited, ground), so ``rho[0, 0]`` is the excited
population. Everything is expressed through the amplitude G(t) of the excited
state and its exact time derivative; the decay rate gamma(t) = -2 dG/dt / G
is only evaluated on request because it has poles wherever G vanishes.

Units: hbar = 1, times in units of 1/lambda when lambda = 1.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import ContractViolation, DomainError, GammaSingularityError
from .trajectory import Trajectory

CRITICAL_TOL = 1e-9
POLE_GUARD = 1e-6


@dataclass(frozen=True)
class JCParams:
    gamma0: float
    lam: float = 1.0
    omega0: float = 1.0

    def __post_init__(self):
        if not (self.gamma0 > 0 and self.lam > 0):
            raise ContractViolation(f"gamma0 and lambda must be positive, got {self.gamma0}, {self.lam}")

    @property
    def regime(self):
        if abs(self.gamma0 - self.lam / 2) <= CRITICAL_TOL * self.lam:
            return "critical"
        return "strong" if self.gamma0 > self.lam / 2 else "weak"


def big_d(params):
    """sqrt(2 gamma0 lambda - lambda^2) as a complex number.

    Real and positive under strong coupling, purely imaginary (i d with the
    hyperbolic rate d) under weak coupling, zero at the critical point.
    """
    if params.regime == "critical":
        return 0j
    return complex(np.sqrt(complex(2 * params.gamma0 * params.lam - params.lam**2)))


def _check_time(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("time must be non-negative")
    return t


def amplitude_and_rate(t, params):
    """G(t) and dG/dt, both real, for scalar or array `t`."""
    t = _check_time(t)
    g0, lam = params.gamma0, params.lam
    env = np.exp(-lam * t / 2)
    regime = params.regime
    if regime == "strong":
        d = big_d(params).real
        x = d * t / 2
        g = env * (np.cos(x) + (lam / d) * np.sin(x))
        gdot = -(g0 * lam / d) * env * np.sin(x)
    elif regime == "weak":
        d = big_d(params).imag
        # e^{-lam t/2} cosh(d t/2) written without overflow
        up = np.exp((d - lam) * t / 2)
        down = np.exp(-(d + lam) * t / 2)
        ch, sh = 0.5 * (up + down), 0.5 * (up - down)
        g = ch + (lam / d) * sh
        gdot = -(g0 * lam / d) * sh
    else:
        g = env * (1 + lam * t / 2)
        gdot = -(lam**2 * t / 4) * env
    if g.ndim == 0:
        return float(g), float(gdot)
    return g, gdot


def g_amplitude(t, params):
    return amplitude_and_rate(t, params)[0]


def g_zeros(params, t_max):
    """Times in (0, t_max] where G vanishes; empty unless strongly coupled."""
    if params.regime != "strong":
        return np.empty(0)
    d = big_d(params).real
    first = (2 / d) * (np.pi - np.arctan(d / params.lam))
    k = np.arange(0, max(0, int(np.floor((t_max - first) * d / (2 * np.pi)))) + 1)
    zeros = first + 2 * np.pi * k / d
    return zeros[zeros <= t_max]


def gamma_rate(t, params):
    """Time-dependent decay rate gamma(t).

    Strong coupling uses 2 g0 lam sin(Dt/2) / (D cos(Dt/2) + lam sin(Dt/2)),
    the tangent form multiplied through by cos(Dt/2); weak coupling its
    hyperbolic continuation; the critical point the D -> 0 limit.
    """
    t = _check_time(t)
    g0, lam = params.gamma0, params.lam
    regime = params.regime
    if regime == "strong":
        zeros = g_zeros(params, float(np.max(t)) + 1.0)
        if zeros.size:
            dist = np.abs(np.subtract.outer(np.atleast_1d(t), zeros))
            i, j = np.unravel_index(np.argmin(dist), dist.shape)
            if dist[i, j] < POLE_GUARD:
                raise GammaSingularityError(float(np.atleast_1d(t)[i]), float(zeros[j]))
        d = big_d(params).real
        x = d * t / 2
        out = 2 * g0 * lam * np.sin(x) / (d * np.cos(x) + lam * np.sin(x))
    elif regime == "weak":
        d = big_d(params).imag
        x = d * t / 2
        out = 2 * g0 * lam * np.tanh(x) / (d + lam * np.tanh(x))
    else:
        out = 2 * g0 * lam * (t / 2) / (1 + lam * t / 2)
    return float(out) if np.ndim(out) == 0 else out


def dissipator_opnorm_excited(t, params):
    """|gamma(t)| |G(t)|^2 for the fully excited start, in the pole-free form |2 G dG/dt|."""
    g, gdot = amplitude_and_rate(t, params)
    return np.abs(2 * g * gdot)


def oscillator_approx(t, d_value, peak):
    """peak * |sin(d_value t)|."""
    if not d_value > 0:
        raise DomainError("d_value must be positive")
    if peak < 0:
        raise DomainError("peak must be non-negative")
    return peak * np.abs(np.sin(d_value * np.asarray(t, dtype=float)))


def default_steps(params, t_final):
    d = abs(big_d(params))
    dt = min(0.01 / params.lam, 0.05 / max(d, params.lam))
    return max(2, int(np.ceil(t_final / dt)))


def system_hamiltonian(params):
    """omega0 sigma_+ sigma_-, already positive semidefinite."""
    return np.diag([params.omega0, 0.0]).astype(complex)


def jc_trajectory(rho0, params, t_final, n_steps=None):
    """Exact reduced dynamics on a uniform grid of ``n_steps`` intervals."""
    rho0 = linalg.density_matrix(rho0)
    if rho0.shape != (2, 2):
        raise ContractViolation("the Jaynes-Cummings qubit needs a 2x2 initial state")
    if not t_final > 0:
        raise DomainError("t_final must be positive")
    n_steps = default_steps(params, t_final) if n_steps is None else int(n_steps)
    if n_steps < 2:
        raise ContractViolation("n_steps must be at least 2")
    t = np.linspace(0.0, t_final, n_steps + 1)
    g, gdot = amplitude_and_rate(t, params)
    phase = np.exp(-1j * params.omega0 * t)
    pe0, coh0 = rho0[0, 0].real, rho0[0, 1]

    states = np.zeros((t.size, 2, 2), dtype=complex)
    states[:, 0, 0] = g**2 * pe0
    states[:, 1, 1] = 1.0 - states[:, 0, 0]
    states[:, 0, 1] = g * phase * coh0
    states[:, 1, 0] = states[:, 0, 1].conj()

    # gamma * rho_ee = -2 G dG/dt rho_ee(0) and gamma/2 * rho_eg = -dG/dt e^{-i w t} rho_eg(0)
    diss = np.zeros_like(states)
    diss[:, 0, 0] = 2 * g * gdot * pe0
    diss[:, 1, 1] = -diss[:, 0, 0]
    diss[:, 0, 1] = gdot * phase * coh0
    diss[:, 1, 0] = diss[:, 0, 1].conj()

    h0 = system_hamiltonian(params)
    comm = linalg.commutator(h0, states)
    gens = diss - 1j * comm
    comm_norm = linalg.operator_norm(comm)
    spreads = np.where(comm_norm > 1e-12, linalg.hamiltonian_spread(h0), 0.0)
    return Trajectory(
        times=t,
        states=states,
        dissipators=diss,
        dissipator_opnorms=linalg.operator_norm(diss),
        hamiltonian_spreads=spreads,
        generators=gens,
        meta={"model": "jc", "params": params},
    )


def excited_state():
    return np.diag([1.0, 0.0]).astype(complex)


def ground_state():
    return np.diag([0.0, 1.0]).astype(complex)
