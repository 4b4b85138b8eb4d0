"""Exception hierarchy shared by the numerical core, the tools and the CLI."""


class CfmacError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(CfmacError, ValueError):
    """Invalid flag, model spec or configuration value."""


class DomainError(CfmacError, ValueError):
    """Argument outside the mathematical domain of a function."""


class UnsupportedModelError(CfmacError, ValueError):
    """Operation is not defined for the requested noise family."""


class DegenerateSignalError(CfmacError, ValueError):
    """Received statistic carries no phase information (z = 0)."""


class NumericFailure(CfmacError, ArithmeticError):
    """A numerical routine did not reach its tolerance.

    Attributes:
        best_estimate: Best value available when the routine gave up
        error_bound: Error estimate attached to ``best_estimate``

    """

    def __init__(self, message: str, best_estimate: float = float("nan"), error_bound: float = float("inf")):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_bound = error_bound


class SingularCovarianceError(NumericFailure):
    """Asymptotic covariance is too close to singular to invert."""

    def __init__(self, moment: str, value: float):
        super().__init__(f"Asymptotic covariance is singular: {moment}={value:.3e} is below 1e-12", best_estimate=value)
        self.moment = moment
