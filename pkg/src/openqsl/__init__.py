"""Quantum speed limits for open quantum systems.

Schatten-norm tools, fidelity measures, two reference models (the damped
Jaynes-Cummings qubit and a spin coupled to a random-matrix quantum dot) and
the speed-limit bounds evaluated on their trajectories.
"""

from .dot import DotParams, dot_trajectory
from .errors import (
    ConfigurationError,
    ContractViolation,
    DegenerateEvolutionError,
    DomainError,
    GammaSingularityError,
    InapplicableBoundError,
    UnattainedTargetError,
)
from .fidelity import bures_fidelity, relative_purity_fidelity, symmetric_fidelity, trace_distance
from .jc import JCParams, jc_trajectory
from .qsl import BETA_OSCILLATOR, BETA_QUARTER, BoundReport, analyze
from .trajectory import Trajectory

__version__ = "0.1.0"

__all__ = [
    "BETA_OSCILLATOR",
    "BETA_QUARTER",
    "BoundReport",
    "ConfigurationError",
    "ContractViolation",
    "DegenerateEvolutionError",
    "DomainError",
    "DotParams",
    "GammaSingularityError",
    "InapplicableBoundError",
    "JCParams",
    "Trajectory",
    "UnattainedTargetError",
    "analyze",
    "bures_fidelity",
    "dot_trajectory",
    "jc_trajectory",
    "relative_purity_fidelity",
    "symmetric_fidelity",
    "trace_distance",
]
