"""Exception types shared across the package."""


class QshjeError(Exception):
    """Base class for all package-specific errors."""


class EmptyDomain(QshjeError):
    """The requested solution domain is empty or inverted."""


class OutOfDomain(QshjeError):
    """An evaluation point lies outside the solution domain."""


class NonFiniteSolution(QshjeError):
    """Integration overflowed (typically deep inside a forbidden region)."""


class DegenerateGammas(QshjeError):
    """gamma_num * gamma_den == 1, which collapses the action to a constant."""


class DuplicateAxis(QshjeError):
    """Two 1D actions claim the same cartesian axis."""


class StencilOutOfDomain(QshjeError):
    """A finite-difference stencil would leave the solution domain."""


class DegeneratePoint(QshjeError):
    """Wavefunction combination vanishes at the point; action recovery undefined."""


class DenominatorZero(QshjeError):
    """The tensor-action denominator vanishes at the evaluation point."""


class DegenerateTensor(QshjeError):
    """Both coefficient tensors are (numerically) zero."""


class IllConditionedFit(QshjeError):
    """Sample geometry too degenerate for a least-squares coefficient fit."""


class StepUnderflow(QshjeError):
    """Event localisation hit the minimum step size without resolving."""


class LeftDomain(QshjeError):
    """A trajectory left the configured spatial domain."""


class ConfigError(QshjeError):
    """Scenario file is malformed or inconsistent."""
