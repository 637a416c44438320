"""Exception hierarchy for rigorous computations.

Every failure mode is loud: an enclosure that cannot be produced raises,
it is never silently widened to an infinite or invalid interval.
"""


class SobembError(Exception):
    """Base class for all library errors."""


class DomainError(SobembError):
    """Input outside the mathematical domain of an operation."""


class DivisionByZeroInterval(SobembError):
    """Interval division by an interval containing zero."""


class OverflowError_(SobembError):
    """An interval endpoint left the finite binary64 range."""


class CapacityError(SobembError):
    """A series expansion would exceed the configured maximum order."""


class QuadratureError(SobembError):
    """Requested quadrature accuracy unattainable at the cell budget."""


class NoConvergence(SobembError):
    """Newton iteration did not reach the residual tolerance."""


class SingularJacobian(SobembError):
    """Linear solve inside the Newton iteration failed."""


class GapFailure(SobembError):
    """Spectral tail gap condition of the inverse-norm bound violated."""


class NotInvertible(SobembError):
    """Rigorous lower bound on the linearization's smallest singular value is <= 0."""


class ConditionFailure(SobembError):
    """Newton-Kantorovich condition 2 K^2 delta g < 1 violated."""


class FixedPointFailure(SobembError):
    """No valid radius found for the L-infinity bootstrap inequality."""


class HypothesisFailure(SobembError):
    """Enclosure hypothesis ||u|| > 2r violated."""


class CertificateMissing(SobembError):
    """Enclosure requested without a verified positiveness certificate."""


class SoundnessViolation(SobembError):
    """Cross-check failed: a rigorous lower bound exceeded a rigorous upper bound."""
