"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`BephaseError`; most also derive from :class:`ValueError` because they
signal bad input rather than a failed computation.
"""


class BephaseError(Exception):
    """Base class for package errors."""


class NonSquareError(BephaseError, ValueError):
    pass


class NonHermitianError(BephaseError, ValueError):
    pass


class DimensionMismatchError(BephaseError, ValueError):
    pass


class InvalidStateError(BephaseError, ValueError):
    """Matrix fails the density-operator invariants (Hermitian, PSD, unit trace)."""


class NotNormalizedError(BephaseError, ValueError):
    pass


class ZeroDimensionError(BephaseError, ValueError):
    pass


class ZeroVectorError(BephaseError, ValueError):
    pass


class FidelityOutOfRangeError(BephaseError, ValueError):
    pass


class InvalidParamsError(BephaseError, ValueError):
    pass


class WrongBlockInputError(BephaseError, ValueError):
    pass


class EmptyWeightsError(BephaseError, ValueError):
    pass


class AmbientTooSmallError(BephaseError, ValueError):
    pass


class RankOutOfRangeError(BephaseError, ValueError):
    pass


class PTooSmallError(BephaseError, ValueError):
    pass


class DegenerateFilterError(BephaseError, ValueError):
    pass


class WrongRankError(BephaseError, ValueError):
    pass


class DimensionCapExceededError(BephaseError, ValueError):
    pass


class NonNegativeWitnessError(BephaseError, ValueError):
    pass


class InvalidEtaError(BephaseError, ValueError):
    pass


class NoViolationError(BephaseError, ValueError):
    pass


class NotReachedError(BephaseError):
    """Truncation search exhausted the ambient dimension."""


class NonSquareLocalDimsError(BephaseError, ValueError):
    pass


class FilterAnnihilatesStateError(BephaseError, ValueError):
    pass


class NotPPTError(BephaseError, ValueError):
    pass


class ZeroEpsilonError(BephaseError):
    """Product-vector minimum is numerically zero, so the witness degenerates."""


class InfeasibleConstraintsError(BephaseError):
    pass


class ParseError(BephaseError, ValueError):
    pass
