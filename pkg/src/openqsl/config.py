"""Run configuration: one JSON document per run, CLI flags override file values.

Precedence is flag > file > default. Defaults reproduce the reference settings:
lambda = 1, tau = 10 and a 120-point log grid for the Jaynes-Cummings sweep;
N1 = N2 = 500, delta_eps = 0.5, coupling 0.02, tau = 8 and ten seeds for the
dot ensemble.
"""

import dataclasses
import json
from dataclasses import dataclass, field
from typing import List, Optional

from . import experiments
from .errors import ConfigurationError
from .linalg import NORM_FLAVORS
from .qsl import BETA_OSCILLATOR, BETA_QUARTER


@dataclass
class JCConfig:
    lam: float = 1.0
    omega0: float = 1.0
    tau: float = 10.0
    gamma_min: float = experiments.SWEEP_RANGE[0]
    gamma_max: float = experiments.SWEEP_RANGE[1]
    points: int = experiments.SWEEP_POINTS
    # explicit grid; overrides gamma_min/gamma_max/points when set
    gammas: Optional[List[float]] = None
    # single coupling for jc-trajectory
    gamma0: float = 10.0
    n_steps: Optional[int] = None
    beta: float = BETA_OSCILLATOR
    # None sums every revival; a number truncates the BLP integral there
    blp_window: Optional[float] = None

    def grid(self):
        if self.gammas is not None:
            return [float(g) for g in self.gammas]
        return [float(g) for g in experiments.sweep_grid(self.points, self.gamma_min, self.gamma_max)]


@dataclass
class DotConfig:
    n1: int = 500
    n2: int = 500
    delta_eps: float = 0.5
    delta_e: float = 10.0
    coupling: float = 0.02
    spin_term: str = "half"
    initial_level: Optional[int] = None
    kind: str = "excited"
    tau: float = 8.0
    n_steps: int = 1600
    seeds: List[int] = field(default_factory=lambda: list(range(10)))
    betas: List[float] = field(default_factory=lambda: [1.0, BETA_QUARTER])


@dataclass
class IneqConfig:
    trials: int = 500
    max_dim: int = 8
    seed: int = 0


@dataclass
class RunConfig:
    jc: JCConfig = field(default_factory=JCConfig)
    dot: DotConfig = field(default_factory=DotConfig)
    ineq: IneqConfig = field(default_factory=IneqConfig)
    out: str = "out"
    jobs: int = 1
    norm_flavor: str = "op"
    h_spread: Optional[str] = None

    def to_dict(self):
        return dataclasses.asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigurationError("config must be a JSON object")
        blocks = {"jc": JCConfig, "dot": DotConfig, "ineq": IneqConfig}
        kwargs = {}
        for key, value in data.items():
            if key in blocks:
                kwargs[key] = _build(blocks[key], value, key)
            else:
                kwargs[key] = value
        cfg = _build(cls, kwargs, "config")
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    @classmethod
    def load(cls, path):
        try:
            with open(path, encoding="utf-8") as fh:
                return cls.from_json(fh.read())
        except OSError as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc}") from exc

    def validate(self):
        try:
            self._check()
        except TypeError as exc:
            raise ConfigurationError(f"config field has the wrong type: {exc}") from exc
        return self

    def _check(self):
        if self.jobs < 1:
            raise ConfigurationError("jobs must be >= 1")
        if self.norm_flavor not in NORM_FLAVORS:
            raise ConfigurationError(f"norm_flavor must be one of {sorted(NORM_FLAVORS)}")
        if self.h_spread not in (None, "half", "full"):
            raise ConfigurationError("h_spread must be 'half' or 'full'")
        jc, dot, ineq = self.jc, self.dot, self.ineq
        if not (jc.lam > 0 and jc.tau > 0 and jc.gamma0 > 0):
            raise ConfigurationError("lam, tau and gamma0 must be positive")
        if jc.gammas is None:
            if jc.points < 1 or not 0 < jc.gamma_min <= jc.gamma_max:
                raise ConfigurationError("invalid sweep grid")
            if jc.points == 1 and jc.gamma_min != jc.gamma_max:
                raise ConfigurationError("a one-point grid needs gamma_min == gamma_max")
        elif not jc.gammas or any(not g > 0 for g in jc.gammas):
            raise ConfigurationError("gammas must be a non-empty list of positive numbers")
        if jc.n_steps is not None and jc.n_steps < 2:
            raise ConfigurationError("jc n_steps must be >= 2")
        if not 0 < jc.beta <= 1:
            raise ConfigurationError("beta must lie in (0, 1]")
        if not dot.betas or any(not 0 < b <= 1 for b in dot.betas):
            raise ConfigurationError("betas must be a non-empty list in (0, 1]")
        if dot.kind not in ("excited", "coherent"):
            raise ConfigurationError("dot kind must be 'excited' or 'coherent'")
        if dot.spin_term not in ("half", "full"):
            raise ConfigurationError("spin_term must be 'half' or 'full'")
        if not dot.seeds:
            raise ConfigurationError("seed list is empty")
        if dot.tau <= 0 or dot.n_steps < 2 or dot.n1 < 1 or dot.n2 < 1:
            raise ConfigurationError("invalid dot window or band sizes")
        if ineq.trials < 1 or ineq.max_dim < 2:
            raise ConfigurationError("trials must be >= 1 and max_dim >= 2")


def _build(klass, values, where):
    if isinstance(values, klass):
        return values
    if not isinstance(values, dict):
        raise ConfigurationError(f"{where} must be a JSON object")
    names = {f.name for f in dataclasses.fields(klass)}
    unknown = sorted(set(values) - names)
    if unknown:
        raise ConfigurationError(f"unknown {where} field(s): {', '.join(unknown)}")
    try:
        return klass(**values)
    except TypeError as exc:
        raise ConfigurationError(f"bad {where}: {exc}") from exc
