"""Domain-level exceptions shared across the toolkit.

Argument-validation failures (wrong dimensions, negative scales, malformed
structure descriptions) raise plain ``ValueError``; the classes below mark
conditions where the inputs are well formed but the requested quantity does
not exist for that problem geometry.
"""


class DomainError(Exception):
    """Base class for geometry-dependent failure modes (CLI exit code 1)."""


class BelowPhaseTransitionError(DomainError):
    """Too few measurements: m does not exceed the minimal Gaussian distance."""


class OutOfRegionError(DomainError):
    """A scale argument lies outside the admissible open interval."""


class NoInteriorMinimumError(DomainError):
    """Bracket expansion found no interior minimum of the distance curve."""


class InnerMinimizerUnboundedError(DomainError):
    """Inner scalar minimization is unbounded (distance exceeds m)."""


class CapTooSmallError(DomainError):
    """A numeric saddle search terminated on the search-box boundary."""
