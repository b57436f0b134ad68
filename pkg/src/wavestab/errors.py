"""Exception taxonomy shared across the package.

Solver terminations (blowup, boundary contamination, singular coefficient
matrix) are raised internally as :class:`SolverEvent` subclasses and converted
to a :class:`~wavestab.solver.Termination` value by the run loop; everything
else signals misuse or a hypothesis failure and propagates to the caller.
"""

__all__ = [
    "WavestabError",
    "ConfigError",
    "UnknownNameError",
    "InsufficientHistoryError",
    "HaloExhaustedError",
    "RegionOutsideDomainError",
    "NonSymmetricCoefficientsError",
    "EvaluationFailureError",
    "NoBoostFoundError",
    "HypothesisViolationError",
    "SupportViolationError",
    "ResidualExceedsTolError",
    "QuadratureError",
    "StudyInvalidError",
    "SolverEvent",
    "BlowupError",
    "BoundaryContaminationError",
    "SingularCoefficientError",
]


class WavestabError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(WavestabError):
    """Invalid or unknown configuration content."""


class UnknownNameError(WavestabError, KeyError):
    """Requested name is not in the relevant catalog."""


class InsufficientHistoryError(WavestabError):
    """State does not carry enough time levels for the requested derivative."""


class HaloExhaustedError(WavestabError):
    """Field is not quiet near the boundary, so stencil halos are invalid."""


class RegionOutsideDomainError(WavestabError):
    """Requested spacetime region is not covered by the stored trajectory."""


class NonSymmetricCoefficientsError(WavestabError):
    """A coefficient map produced a non-symmetric matrix."""


class EvaluationFailureError(WavestabError):
    """A user-supplied coefficient or profile map raised or returned junk."""


class NoBoostFoundError(WavestabError):
    """Boost search ladder exhausted; hypothesis violation likely."""


class HypothesisViolationError(WavestabError):
    """A structural hypothesis (positivity, inequality premise) fails."""


class SupportViolationError(WavestabError):
    """Initial data is not compactly supported away from the boundary."""


class ResidualExceedsTolError(WavestabError):
    """An exactness check produced a residual above tolerance."""


class QuadratureError(WavestabError):
    """Adaptive quadrature failed to converge."""


class StudyInvalidError(WavestabError):
    """A convergence study run terminated abnormally."""


class SolverEvent(WavestabError):
    """Base for abnormal solver terminations; carries a termination label."""

    termination = "abnormal"


class BlowupError(SolverEvent):
    """Non-finite values or sup-norm above the blowup threshold."""

    termination = "Blowup"


class BoundaryContaminationError(SolverEvent):
    """Fields are no longer quiet at the outermost grid nodes."""

    termination = "BoundaryContamination"


class SingularCoefficientError(SolverEvent):
    """The time-direction coefficient matrix is singular or ill-conditioned."""

    termination = "SingularA00"
