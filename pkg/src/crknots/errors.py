"""Exception types shared across the package."""


class CrknotsError(Exception):
    """Base class for all package-specific errors."""


class PolyParseError(CrknotsError):
    """Syntax error in polynomial text. Carries the offending position."""

    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class MixedFormError(CrknotsError):
    """Operands use different variable sets (ambient vs Heisenberg form)."""


class NotHolomorphic(CrknotsError):
    """Input polynomial contains antiholomorphic variables."""


class NotInRange(CrknotsError):
    """Right-hand side is outside the range of the operator."""


class PoleHit(CrknotsError):
    """Evaluation requested too close to the excluded point of a map."""


class NonConvergence(CrknotsError):
    """Iterative solver failed to reach the residual tolerance."""


class RankDeficientJacobian(CrknotsError):
    """Jacobian lost the rank required to continue."""


class NoCurveFound(CrknotsError):
    """No seed produced a traceable point of the zero curve."""


class SingularPoint(CrknotsError):
    """Rank drop encountered mid-trace."""


class OpenCurve(CrknotsError):
    """A closed curve was required."""


class CurvesTooClose(CrknotsError):
    """Curves violate the minimum separation needed for a stable integral."""


class PoleTooClose(CrknotsError):
    """A curve point lies too close to the projection pole."""
