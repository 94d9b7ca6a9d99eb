"""Exception types shared across the package."""


class DomainError(ValueError):
    """State outside the admissible region of a model (e.g. Q >= N)."""


class SingularPointError(ValueError):
    """Recovery attempted at a point where the formulas are singular."""


class RootSelectionError(ValueError):
    """No admissible root (or more than one) of the recovery quadratic."""


class DegenerateInputError(ValueError):
    """Recovery quadratic has no real roots; the jet is not model-consistent."""


class RegimeError(ValueError):
    """Jet violates a sign condition the recovery formulas rely on."""


class MeasurementError(ValueError):
    """Observer driven with a non-positive measurement."""


class ConfigError(ValueError):
    """Scenario document failed to parse or validate."""


class DivergenceError(RuntimeError):
    """Numerical state stopped being finite during integration."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time
