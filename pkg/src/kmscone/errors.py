"""Exception types shared across the toolkit."""


class KmsconeError(Exception):
    """Base class for all toolkit errors."""


class SingularEvaluation(KmsconeError):
    """An expression was evaluated on the singular locus of one of its nodes."""


class DegreeMismatch(KmsconeError):
    """Graded operands have incompatible degrees or kinds."""


class DegreeTooHigh(KmsconeError):
    """Operator restricted to low degrees received a higher-degree input."""


class DegenerateVolume(KmsconeError):
    """A volume form vanishes where it must not."""


class FlatNotInvertible(KmsconeError):
    """The cosymplectic flat map is singular at a sampled point."""


class ZetaDegenerate(KmsconeError):
    """dzeta vanishes at a point of the critical locus."""


class NonIntegrable(KmsconeError):
    """A singular density factor with exponent <= -1 meets the integration domain."""


class QuadratureNotConverged(KmsconeError):
    """The adaptive quadrature exhausted its cell budget above tolerance."""


class FlowEscaped(KmsconeError):
    """An integrated trajectory left its declared bounding box."""


class Obstructed(KmsconeError):
    """A transport equation has no solution; carries the offending projection."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SmallDivisorGuard(KmsconeError):
    """A Fourier divisor is numerically resonant for the given frequency."""


class NotInRange(KmsconeError):
    """The source is not in the range of the transport operator; carries a witness."""

    def __init__(self, message, theta=None, sign=None, value=None):
        super().__init__(message)
        self.theta = theta
        self.sign = sign
        self.value = value


class NonPoissonInput(KmsconeError):
    """A vector field required to be Poisson fails the residual check."""


class NonConstantBoundary(KmsconeError):
    """A boundary value expected to be constant varies along the critical locus."""


class EmptyCone(KmsconeError):
    """A classification cell has no generators by design."""


class UnknownCell(KmsconeError):
    """Parameters outside the declared classification grid."""


class NotCosymplectic(KmsconeError):
    """The example carries no cosymplectic (sub)structure."""


class ConfigError(KmsconeError):
    """Malformed scenario configuration."""
