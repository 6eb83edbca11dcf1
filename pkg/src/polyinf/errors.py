"""Exception types raised across the package."""


class PolyInfError(Exception):
    """Base class for all package errors."""


class DegreeOverflow(PolyInfError, ValueError):
    """A result would carry a monomial of total degree above the cap."""


class DomainViolation(PolyInfError, ValueError):
    """A point lies outside the region where a kernel or space is defined."""


class Singularity(PolyInfError, ZeroDivisionError):
    """A rational expression or a linear system is numerically singular."""


class TailNotConverged(PolyInfError, ArithmeticError):
    """A truncated series did not meet its tail bound."""
