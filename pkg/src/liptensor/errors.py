"""Exception hierarchy.

Every error raised by the library derives from :class:`LipTensorError` so the
CLI can map them onto exit code 2 with a one-line diagnostic.
"""

from __future__ import annotations


class LipTensorError(Exception):
    """Base class for all library errors."""


class InputError(LipTensorError):
    """Malformed input data (files, matrices, vectors)."""


# metric spaces
class MetricError(InputError):
    pass


class NotSquareMatrix(MetricError):
    pass


class NonZeroDiagonal(MetricError):
    pass


class AsymmetricMatrix(MetricError):
    pass


class NegativeDistance(MetricError):
    pass


class ZeroOffDiagonal(MetricError):
    pass


class TriangleViolation(MetricError):
    def __init__(self, witness: tuple[int, int, int], message: str):
        super().__init__(message)
        self.witness = witness


class MinSizeError(InputError):
    pass


# normed spaces
class SpaceError(InputError):
    pass


class UnboundedBall(SpaceError):
    pass


class AsymmetricFacets(SpaceError):
    pass


class FullSubspace(SpaceError):
    pass


# molecules / operators
class IndexOutOfRange(InputError):
    pass


class DegeneratePair(InputError):
    pass


class SpaceMismatch(InputError):
    pass


class BasePointNotFixed(InputError):
    pass


class BasePointMissing(InputError):
    pass


class ZeroMolecule(InputError):
    pass


# computation
class CapExceeded(LipTensorError):
    pass


class UnsupportedExponent(InputError):
    pass


class MalformedProblem(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class InternalDualityGap(LipTensorError):
    """Primal and dual optima differ. Signals a solver bug."""
