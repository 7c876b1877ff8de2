from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation
from .linalg import HERMITIAN_TOL, PSD_TOL, TRACE_TOL


@dataclass(frozen=True)
class Trajectory:
    """Reduced-system dynamics sampled on an increasing time grid.

    ``generators`` holds the full right-hand side L_t(rho_t) = d rho_t / dt, and
    ``dissipators`` its non-unitary part D_t(rho_t). ``hamiltonian_spreads`` is
    zero wherever the system Hamiltonian commutes with the state, since the
    Hamiltonian contributes nothing to the motion there.
    """

    times: np.ndarray
    states: np.ndarray
    dissipators: np.ndarray
    dissipator_opnorms: np.ndarray
    hamiltonian_spreads: np.ndarray
    generators: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        n = len(self.times)
        for name in ("states", "dissipators", "dissipator_opnorms", "hamiltonian_spreads", "generators"):
            arr = getattr(self, name)
            if len(arr) != n:
                raise ContractViolation(f"{name} has {len(arr)} entries, times has {n}")
        if n == 0:
            raise ContractViolation("empty trajectory")
        if n > 1 and np.any(np.diff(self.times) <= 0):
            raise ContractViolation("time grid must be strictly increasing")
        s = self.states
        if np.max(np.abs(s - np.swapaxes(s, -1, -2).conj())) > HERMITIAN_TOL:
            raise ContractViolation("trajectory state not Hermitian")
        tr = np.trace(s, axis1=-2, axis2=-1).real
        if np.max(np.abs(tr - 1.0)) > TRACE_TOL:
            raise ContractViolation("trajectory state trace deviates from 1")
        if np.min(np.linalg.eigvalsh(s)) < -PSD_TOL:
            raise ContractViolation("trajectory state not positive semidefinite")
        if np.max(np.abs(np.trace(self.dissipators, axis1=-2, axis2=-1))) > TRACE_TOL:
            raise ContractViolation("dissipator is not traceless")
        for name in ("times", "states", "dissipators", "dissipator_opnorms", "hamiltonian_spreads", "generators"):
            getattr(self, name).setflags(write=False)

    def __len__(self):
        return len(self.times)

    @property
    def rho0(self):
        return self.states[0]

    @property
    def t_final(self):
        return float(self.times[-1])
