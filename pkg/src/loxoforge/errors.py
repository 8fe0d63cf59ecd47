"""Exception hierarchy.

Numeric failures derive from :class:`NumericError` and configuration problems
from :class:`ConfigError`; the CLI maps these onto exit codes 3 and 2.
"""

from __future__ import annotations


class LoxoforgeError(Exception):
    pass


class NumericError(LoxoforgeError):
    pass


class ConfigError(LoxoforgeError):
    pass


class DomainViolation(NumericError):
    def __init__(self, message: str, point=None):
        super().__init__(message)
        self.point = point


class NonPositiveVolume(NumericError):
    def __init__(self, u: float, value: float):
        super().__init__(f"volume function is not positive at u={u!r} (omega={value!r})")
        self.u = u
        self.value = value


class NearSingularOrbit(NumericError):
    def __init__(self, u: float, omega: float):
        super().__init__(f"orbit near-singular at u={u!r} (omega={omega!r})")
        self.u = u
        self.omega = omega


class QuadratureNonConvergent(NumericError):
    def __init__(self, a: float, b: float, depth: int):
        super().__init__(f"adaptive Simpson did not converge on [{a!r}, {b!r}] at depth {depth}")
        self.a = a
        self.b = b
        self.depth = depth


class SpeedDeficitNegative(NumericError):
    """The profile cannot be arc-length parametrized at ``u``."""

    def __init__(self, u: float, deficit: float):
        super().__init__(f"speed deficit is negative at u={u!r} ({deficit!r})")
        self.u = u
        self.deficit = deficit


class InconsistentConstants(NumericError):
    pass


class WrongCurvatureClass(NumericError):
    pass


class UnknownCatalogId(ConfigError):
    pass


class BadParams(ConfigError):
    pass
