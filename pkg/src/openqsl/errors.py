"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """Input breaks a documented precondition (shape, Hermiticity, trace...)."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class ConfigurationError(ValueError):
    """Run or integrator settings cannot be honoured."""


class DegenerateEvolutionError(ArithmeticError):
    """A bound has a vanishing denominator because nothing evolves."""


class UnattainedTargetError(ValueError):
    """The requested angle is never reached inside the trajectory window."""

    def __init__(self, target, max_theta):
        super().__init__(
            f"target angle {target:.6g} never attained (max theta_R = {max_theta:.6g})"
        )
        self.target = target
        self.max_theta = max_theta


class GammaSingularityError(ArithmeticError):
    """Decay rate requested too close to one of its poles."""

    def __init__(self, t, pole):
        super().__init__(f"gamma(t) evaluated at t={t:.9g}, within 1e-6 of pole {pole:.9g}")
        self.t = t
        self.pole = pole


class InapplicableBoundError(ValueError):
    """Bound formula requires conditions the trajectory does not meet."""
