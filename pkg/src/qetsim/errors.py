"""Exception types shared across the package."""


class QetsimError(Exception):
    """Base class for all package errors."""


class DimensionError(QetsimError):
    """Operands act on different numbers of sites."""


class SizeLimitError(QetsimError):
    """Requested dense construction exceeds the configured qubit limit."""


class NormalizationError(QetsimError):
    """State vector is not normalized to within tolerance."""


class AlgebraError(QetsimError):
    """Operator violates an algebraic requirement (e.g. not Hermitian)."""


class ConvergenceError(QetsimError):
    """Iterative eigensolver failed to converge."""


class ContractError(QetsimError):
    """A documented precondition or postcondition was violated."""


class PartitionError(QetsimError):
    """Invalid bipartition (one side empty or out of range)."""
