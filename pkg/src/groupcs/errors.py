"""Exception and warning types raised across the package."""


class GroupCSError(Exception):
    """Base class for all package errors."""


class PartitionError(GroupCSError, ValueError):
    pass


class OverlappingGroups(PartitionError):
    pass


class IncompleteCover(PartitionError):
    pass


class GroupTooLarge(PartitionError):
    pass


class EmptyGroup(PartitionError):
    pass


class IndexOutOfRange(GroupCSError, IndexError):
    pass


class DimensionMismatch(GroupCSError, ValueError):
    pass


class EnumerationCapExceeded(GroupCSError, RuntimeError):
    """The instance is too large for exhaustive enumeration."""


class LaminarViolation(GroupCSError, ValueError):
    """Two tree node sets intersect without one containing the other."""


class NoDisjointPairsAvailable(GroupCSError, ValueError):
    pass


class UnsupportedNorm(GroupCSError, ValueError):
    pass


class UnsupportedNormForClosedForm(UnsupportedNorm):
    pass


class DeltaTooLarge(GroupCSError, ValueError):
    pass


class NotCompressible(GroupCSError, ValueError):
    pass


class NonPositiveParameter(GroupCSError, ValueError):
    pass


class InvalidRange(GroupCSError, ValueError):
    pass


class InfeasibleProblem(GroupCSError, ValueError):
    pass


class SupportExceedsBudget(GroupCSError, ValueError):
    pass


class RankDeficientWarning(UserWarning):
    """A column submatrix has a (numerically) zero singular value, so delta >= 1."""
