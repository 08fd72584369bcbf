"""Exception hierarchy shared by all modules."""


class RS3bError(Exception):
    """Base class for all workbench errors."""


class DomainError(RS3bError):
    """Input lies outside the open polytope (a square-root factor went non-positive)."""


class PatchBoundary(RS3bError):
    """A homogeneous coordinate is too small for the dense-patch inverse maps."""


class BasePointMismatch(RS3bError):
    """Two tangents were paired at different base points."""


class SolveFailure(RS3bError):
    """The vector-field linear solve did not reach its residual tolerance."""


class ConvergenceFailure(RS3bError):
    """An eigen-solver failed to reconstruct its input to tolerance."""


class ConstraintViolation(RS3bError):
    """A point that must sit on the moment-map level set does not."""


class NotOnConstraint(ConstraintViolation):
    """Inverse gauge fixing was handed a point off the constraint surface."""


class GaugeDegenerate(RS3bError):
    """The diagonal-entry gauge recovery hit a vanishing normalization."""


class AmbiguousMatch(RS3bError):
    """Gauge comparison is ambiguous because a spectrum is non-regular."""


class BoundaryApproach(RS3bError):
    """A local flow came within the safety margin of the polytope boundary."""

    def __init__(self, t, point, message="trajectory approached the polytope boundary"):
        super().__init__(f"{message} at t={t:.6g}")
        self.t = t
        self.point = point
