"""Spin coupled to a single-particle quantum dot with two random-matrix bands.

The dot has a lower band of ``n1`` levels at (delta_eps/n1) * k and an upper
band of ``n2`` levels at delta_e + (delta_eps/n2) * k. The coupling
lambda * sum c(n1, n2) sigma_+ |n1><n2| + h.c. flips the spin up while moving
the electron down a band, so starting from |e, n1_init> (or a superposition
with |g, n1_init>) the dynamics never leaves

    {|e, n1>} + {|g, n2>} + {|g, n1_init>},

the last state being decoupled and only picking up a phase. State vectors are
stored in exactly that order, with the decoupled amplitude last.

``spin_term="half"`` uses (delta_e/2) sigma_z, so the spin splitting equals
the band gap and the flip is resonant. ``"full"`` uses delta_e * sigma_z,
which detunes the flip by delta_e.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg
from .errors import ConfigurationError, ContractViolation
from .trajectory import Trajectory

STABILITY_LIMIT = 0.1
NORM_TOL = 1e-8


@dataclass(frozen=True)
class DotParams:
    n1: int = 500
    n2: int = 500
    delta_eps: float = 0.5
    delta_e: float = 10.0
    coupling: float = 0.02
    seed: int = 0
    initial_level: Optional[int] = None
    spin_term: str = "half"

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1:
            raise ContractViolation("band level counts must be >= 1")
        if self.delta_eps < 0 or self.coupling < 0:
            raise ContractViolation("delta_eps and coupling must be non-negative")
        if self.spin_term not in ("half", "full"):
            raise ContractViolation(f"spin_term must be 'half' or 'full', got {self.spin_term!r}")
        if not 1 <= self.level <= self.n1:
            raise ContractViolation(f"initial_level {self.level} outside 1..{self.n1}")

    @property
    def level(self):
        """1-based index of the initially occupied lower-band level."""
        return max(1, self.n1 // 2) if self.initial_level is None else self.initial_level

    @property
    def spin_coefficient(self):
        return 0.5 * self.delta_e if self.spin_term == "half" else self.delta_e

    @property
    def dim(self):
        return self.n1 + self.n2 + 1


def coupling_matrix(params):
    """Complex Gaussian c(n1, n2) with unit variance (Re, Im each variance 1/2)."""
    rng = np.random.default_rng(params.seed)
    shape = (params.n1, params.n2)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def level_energies(params):
    """Diagonal energies of (|e, n1>, |g, n2>, |g, n1_init>)."""
    s = params.spin_coefficient
    k1 = np.arange(1, params.n1 + 1)
    k2 = np.arange(1, params.n2 + 1)
    e_band = s + params.delta_eps / params.n1 * k1
    g_band = -s + params.delta_e + params.delta_eps / params.n2 * k2
    decoupled = -s + params.delta_eps / params.n1 * params.level
    return e_band, g_band, decoupled


def build_hamiltonian(params, include_decoupled=False):
    """Hamiltonian of the closed sector, optionally with the decoupled state appended."""
    e_band, g_band, decoupled = level_energies(params)
    n1, n2 = params.n1, params.n2
    dim = n1 + n2 + (1 if include_decoupled else 0)
    h = np.zeros((dim, dim), dtype=complex)
    idx = np.arange(n1 + n2)
    h[idx, idx] = np.concatenate([e_band, g_band])
    block = params.coupling * coupling_matrix(params)
    h[:n1, n1:n1 + n2] = block
    h[n1:n1 + n2, :n1] = block.conj().T
    if include_decoupled:
        h[-1, -1] = decoupled
    return h


def system_hamiltonian(params):
    s = params.spin_coefficient
    return np.diag([s, -s]).astype(complex)


def initial_state(params, kind):
    psi = np.zeros(params.dim, dtype=complex)
    e_index = params.level - 1
    if kind == "excited":
        psi[e_index] = 1.0
    elif kind == "coherent":
        psi[e_index] = psi[-1] = 1 / np.sqrt(2)
    else:
        raise ContractViolation(f"unknown initial state kind {kind!r}")
    return psi


def hermitian_opnorm(h):
    return float(np.max(np.abs(np.linalg.eigvalsh(h))))


@dataclass(frozen=True)
class SectorEvolution:
    times: np.ndarray
    amplitudes: np.ndarray
    norm_drift: float


def rk4_step_matrix(h, dt):
    """One classical RK4 step for i dpsi/dt = H psi as a matrix.

    For a constant linear right-hand side the four RK4 stages collapse to the
    degree-4 Taylor polynomial of -i H dt, applied here in Horner form.
    """
    a = -1j * dt * np.asarray(h, dtype=complex)
    eye = np.eye(a.shape[0], dtype=complex)
    return eye + a @ (eye + a @ (eye + a @ (eye + a / 4) / 3) / 2)


def propagate(psi0, h, t_final, dt, record_every=1):
    """Classical RK4 for i dpsi/dt = H psi, renormalising after every step.

    ``norm_drift`` accumulates the per-step deviation removed by the
    renormalisation. Requires dt * |H|_op <= 0.1.
    """
    psi = np.array(psi0, dtype=complex)
    hnorm = hermitian_opnorm(h)
    if dt * hnorm > STABILITY_LIMIT:
        raise ConfigurationError(
            f"dt={dt:.3g} too large for |H|_op={hnorm:.4g}; need dt <= {STABILITY_LIMIT / hnorm:.4g}"
        )
    if abs(np.linalg.norm(psi) - 1) > NORM_TOL:
        raise ContractViolation("initial state must have unit norm")
    n = int(round(t_final / dt))
    if n < 1 or abs(n * dt - t_final) > 1e-9 * max(1.0, t_final):
        raise ConfigurationError(f"t_final={t_final} is not a whole number of steps dt={dt}")
    step_matrix = rk4_step_matrix(h, dt)
    out = [psi.copy()]
    drift = 0.0
    for step in range(1, n + 1):
        psi = step_matrix @ psi
        norm = np.linalg.norm(psi)
        drift += abs(norm - 1.0)
        psi /= norm
        if step % record_every == 0:
            out.append(psi.copy())
    times = dt * record_every * np.arange(len(out))
    return SectorEvolution(times, np.array(out), drift)


def embed(psi, params):
    """Rearrange sector amplitudes into a (spin, dot level) array of shape (..., 2, n1 + n2)."""
    psi = np.asarray(psi)
    n1, n2 = params.n1, params.n2
    out = np.zeros(psi.shape[:-1] + (2, n1 + n2), dtype=complex)
    out[..., 0, :n1] = psi[..., :n1]
    out[..., 1, n1:] = psi[..., n1:n1 + n2]
    out[..., 1, params.level - 1] = psi[..., -1]
    return out


def reduced_density(psi, params):
    """Spin state after tracing out the dot."""
    psi = np.asarray(psi)
    if np.max(np.abs(np.linalg.norm(psi, axis=-1) - 1)) > NORM_TOL:
        raise ContractViolation("total state is not normalised")
    m = embed(psi, params)
    return m @ np.swapaxes(m, -1, -2).conj()


def reduced_derivative(psi, h, params, hpsi=None):
    """d rho / dt = Tr_dot(-i [H, |psi><psi|]), exactly, from H psi."""
    m = embed(psi, params)
    if hpsi is None:
        hpsi = np.asarray(psi) @ np.asarray(h).T
    phi = embed(hpsi, params)
    x = phi @ np.swapaxes(m, -1, -2).conj()
    return -1j * (x - np.swapaxes(x, -1, -2).conj())


def effective_dissipator(psi, h_total, h_sys, params):
    """D_t(rho_t) = d rho/dt + i [H_sys, rho_t]."""
    rho = reduced_density(psi, params)
    return reduced_derivative(psi, h_total, params) + 1j * linalg.commutator(h_sys, rho)


def spread_value(params, h_spread=None):
    """|H_sys|_spread under the chosen convention: "half" -> delta_e, "full" -> 2 delta_e."""
    if h_spread is None:
        return float(linalg.hamiltonian_spread(system_hamiltonian(params)))
    if h_spread == "half":
        return params.delta_e
    if h_spread == "full":
        return 2 * params.delta_e
    raise ContractViolation(f"h_spread must be 'half' or 'full', got {h_spread!r}")


def dot_trajectory(params, rho0_kind="excited", t_final=8.0, n_steps=1600, h_spread=None):
    """Propagate the total state and reduce it to a spin Trajectory.

    ``meta`` carries the RK4 norm drift and the energy drift of the total state.
    """
    if n_steps < 2:
        raise ContractViolation("n_steps must be at least 2")
    h = build_hamiltonian(params, include_decoupled=True)
    diag = h.diagonal().real
    # a constant shift is a global phase; centring the spectrum lets RK4 take bigger steps
    shift = 0.5 * (diag.max() + diag.min())
    hs = h - shift * np.eye(h.shape[0])
    dt_out = t_final / n_steps
    hnorm = hermitian_opnorm(hs)
    sub = max(1, int(np.ceil(dt_out * hnorm / (0.5 * STABILITY_LIMIT))))
    evo = propagate(initial_state(params, rho0_kind), hs, t_final, dt_out / sub, record_every=sub)
    psi = evo.amplitudes

    states = reduced_density(psi, params)
    states = 0.5 * (states + np.swapaxes(states, -1, -2).conj())
    hpsi = psi @ hs.T
    gens = reduced_derivative(psi, hs, params, hpsi)
    h_sys = system_hamiltonian(params)
    comm = linalg.commutator(h_sys, states)
    diss = gens + 1j * comm
    spreads = np.where(linalg.operator_norm(comm) > 1e-12, spread_value(params, h_spread), 0.0)

    energy = np.sum(psi.conj() * hpsi, axis=1).real + shift
    meta = {
        "model": "dot",
        "params": params,
        "kind": rho0_kind,
        "h_spread": h_spread,
        "norm_drift": evo.norm_drift,
        "energy_drift": float(np.max(np.abs(energy - energy[0]))),
        "energy": float(energy[0]),
    }
    return Trajectory(
        times=evo.times,
        states=states,
        dissipators=diss,
        dissipator_opnorms=linalg.operator_norm(diss),
        hamiltonian_spreads=spreads,
        generators=gens,
        meta=meta,
    )
