"""Exception hierarchy shared across the package."""


class EmcavityError(Exception):
    """Base class for all package-specific errors."""


class DomainError(EmcavityError, ValueError):
    """An input is outside the physical domain of a formula."""


class DataError(EmcavityError):
    """Malformed or unusable input data (files, traces, configs)."""


class GuessError(DataError):
    """A trace does not support automatic initial-guess extraction."""


class NumericalError(EmcavityError):
    """A numerical computation failed or is unreliable."""


class NearPoleError(NumericalError):
    """Linear system too ill-conditioned near a resolvent pole."""

    def __init__(self, omega, condition):
        self.omega = omega
        self.condition = condition
        super().__init__(
            f"resolvent nearly singular at omega={omega:.6e} rad/s "
            f"(condition estimate {condition:.3e})"
        )


class BracketError(EmcavityError, ValueError):
    """A root bracket does not straddle a sign change."""
