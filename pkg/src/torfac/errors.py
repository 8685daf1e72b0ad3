"""Exception hierarchy.

``InvalidInput`` subclasses map to CLI exit code 2, ``NotFiltrable`` to 3 and
``InternalInvariant`` to 4.
"""


class TorfacError(Exception):
    pass


class InvalidInput(TorfacError, ValueError):
    pass


class ZeroVector(InvalidInput):
    pass


class DependentInput(InvalidInput):
    pass


class CapExceeded(InvalidInput):
    pass


class NonSimplicialCone(InvalidInput):
    pass


class VerticalRay(InvalidInput):
    pass


class NotPiStrictlyConvex(InvalidInput):
    pass


class NotFaceToFace(InvalidInput):
    pass


class NotAFace(InvalidInput):
    pass


class OutsideSupport(InvalidInput):
    pass


class PiIndependent(InvalidInput):
    pass


class NotACircuit(InvalidInput):
    pass


class DimensionTooSmall(InvalidInput):
    pass


class AlreadyNonsingular(InvalidInput):
    pass


class NotPiNonsingular(InvalidInput):
    pass


class NotMinimal(InvalidInput):
    pass


class ProjectionNotAFan(InvalidInput):
    pass


class NotSmoothCenter(InvalidInput):
    pass


class BadWeights(InvalidInput):
    pass


class BadCertificate(InvalidInput):
    pass


class AInsideCone(InvalidInput):
    pass


class ChartMismatch(InvalidInput):
    pass


class ZeroIdeal(InvalidInput):
    pass


class NotFiltrable(TorfacError):
    """The precedence relation between circuits has a cycle."""

    def __init__(self, message, cycle=None):
        super().__init__(message)
        self.cycle = cycle or []


class InternalInvariant(TorfacError, AssertionError):
    """A mathematical invariant failed; always a bug, never bad input."""


class IterationCapExceeded(InternalInvariant):
    pass
