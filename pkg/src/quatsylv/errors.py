"""Exception hierarchy shared by every module of the package."""

import numpy as np


class QuatError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(QuatError, ValueError):
    """Operand shapes are not conformable."""


class StructureViolation(QuatError):
    """A complex matrix is not the adjoint image of any quaternion matrix."""


class ConvergenceFailure(QuatError, np.linalg.LinAlgError):
    """An iterative decomposition hit its iteration cap."""


class PairingError(QuatError):
    """Singular values of a complex adjoint failed to occur in equal pairs."""


class SideConditionViolated(QuatError):
    """The hypotheses of a constrained solver do not hold."""


class NotEtaHermitian(QuatError, ValueError):
    """A matrix required to be eta-Hermitian is not."""


class Inconsistent(QuatError):
    """The matrix equation has no solution.

    The failing condition reports are attached as ``reports`` and, when a
    full solve was attempted, the report object as ``report``.
    """

    def __init__(self, message, reports=(), report=None):
        super().__init__(message)
        self.reports = list(reports)
        self.report = report


class GenerationFailed(QuatError):
    """The generator cannot produce the requested kind of instance."""


class ParseError(QuatError, ValueError):
    """A problem or solution file is malformed."""


class ValidationError(QuatError, ValueError):
    """A well-formed file describes a non-conformable problem."""
