"""Exception hierarchy shared across the workbench."""
from __future__ import annotations


class CtrlkError(Exception):
    """Base class for all workbench errors."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class DocumentError(CtrlkError):
    """Malformed or unsupported input document."""


# rings
class NotAUnit(CtrlkError):
    pass


class Singular(CtrlkError):
    pass


# posets
class CycleDetected(CtrlkError):
    pass


class NoOrderExists(CtrlkError):
    pass


class DiagonalNotOne(NoOrderExists):
    """A quotient matrix has a diagonal entry outside the allowed sign set.

    Subclasses NoOrderExists: no partial order can make such a matrix
    unit-diagonal triangular.
    """


class NotNested(CtrlkError):
    pass


class UnknownPoint(CtrlkError):
    pass


# modules / morphisms
class NotASubbasis(CtrlkError):
    pass


class NotDiagonal(CtrlkError):
    pass


class CoefficientOutsideU(CtrlkError):
    pass


class RadiusExceeded(CtrlkError):
    pass


class NotTriangular(CtrlkError):
    pass


class DiagonalNotInvertible(CtrlkError):
    pass


class ShapeMismatch(CtrlkError):
    pass


# chains
class NotAChainMap(CtrlkError):
    pass


class NoCancellation(CtrlkError):
    pass


class InvalidDecomposition(CtrlkError):
    pass


class NotStrictContractible(CtrlkError):
    pass


class RingMismatch(CtrlkError):
    pass


# geometric
class ModuleMismatch(CtrlkError):
    pass


class TrackMismatch(CtrlkError):
    pass


class Disconnected(CtrlkError):
    pass


class NotAComplex(CtrlkError):
    pass


class MissingWitness(CtrlkError):
    pass


class NotEpsilonBounded(CtrlkError):
    pass


# ksimplex
class MissingCertificate(CtrlkError):
    pass


class NotInvertible(CtrlkError):
    pass


class WrongComplementRank(CtrlkError):
    pass


class InvalidInput(CtrlkError):
    pass
