"""Fidelities and distances between density matrices.

The relative-purity fidelity is asymmetric: the second argument is the
reference state whose Hilbert-Schmidt norm normalises the overlap. Its square
is linear in the first argument, which is what makes it convenient for
speed-limit estimates along a trajectory.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import ContractViolation

FIDELITY_TOL = 1e-9
# arccos is sqrt-sensitive at 1: a one-ulp deficit would read as a 1e-8 angle
SNAP = 4 * np.finfo(float).eps


@dataclass(frozen=True)
class FidelityValue:
    value: float
    angle: float

    def __float__(self):
        return self.value


def _fidelity(raw):
    if not (-FIDELITY_TOL <= raw <= 1.0 + FIDELITY_TOL):
        raise ContractViolation(f"fidelity {raw!r} outside [0, 1] beyond tolerance")
    v = min(max(float(raw), 0.0), 1.0)
    if v > 1.0 - SNAP:
        v = 1.0
    return FidelityValue(v, float(np.arccos(v)))


def _pair(rho1, rho2):
    r1 = linalg.density_matrix(rho1)
    r2 = linalg.density_matrix(rho2)
    if r1.shape != r2.shape:
        raise ContractViolation(f"state dimension mismatch {r1.shape} vs {r2.shape}")
    return r1, r2


def relative_purity_fidelity(rho1, rho2):
    """sqrt(Tr{rho1 rho2} / |rho2|_HS); `rho2` is the reference."""
    r1, r2 = _pair(rho1, rho2)
    overlap = np.trace(r1 @ r2).real
    # round-off can push a zero overlap slightly negative
    return _fidelity(np.sqrt(max(overlap, 0.0) / linalg.hs_norm(r2)))


def bures_fidelity(rho1, rho2):
    r1, r2 = _pair(rho1, rho2)
    return _fidelity(linalg.trace_norm(linalg.psd_sqrt(r1) @ linalg.psd_sqrt(r2)))


def symmetric_fidelity(rho1, rho2):
    """|sqrt(rho1) sqrt(rho2)|_HS / sqrt(|rho1|_HS |rho2|_HS)."""
    r1, r2 = _pair(rho1, rho2)
    num = linalg.hs_norm(linalg.psd_sqrt(r1) @ linalg.psd_sqrt(r2))
    return _fidelity(num / np.sqrt(linalg.hs_norm(r1) * linalg.hs_norm(r2)))


def trace_distance(rho1, rho2):
    r1, r2 = _pair(rho1, rho2)
    return float(0.5 * linalg.trace_norm(r1 - r2))


def relative_purity_angle_series(states, rho0):
    """Theta_R(rho_t, rho0) for a stack of states, vectorised.

    Uses the linear form F_R^2 = Tr{rho0 rho_t} / |rho0|_HS.
    """
    r0 = linalg.density_matrix(rho0)
    overlap = np.einsum("ij,tji->t", r0, np.asarray(states)).real
    f2 = overlap / linalg.hs_norm(r0)
    if np.any(f2 < -FIDELITY_TOL) or np.any(f2 > 1 + FIDELITY_TOL):
        raise ContractViolation("relative-purity fidelity outside [0, 1] along trajectory")
    f = np.sqrt(np.clip(f2, 0.0, 1.0))
    return np.arccos(np.where(f > 1.0 - SNAP, 1.0, f))
