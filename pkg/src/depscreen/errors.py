"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`DepScreenError`, which itself is a :class:`ValueError` so callers
that already guard numerical input with ``except ValueError`` keep working.
"""


class DepScreenError(ValueError):
    """Base class for all library errors."""


class DegenerateColumn(DepScreenError):
    """A column is constant where a non-zero spread is required."""


class DimensionMismatch(DepScreenError):
    pass


class LengthMismatch(DepScreenError):
    """Two columns do not have the same number of observations."""


class AlreadyCentered(DepScreenError):
    pass


class NonConvergence(DepScreenError):
    """An iterative solver exhausted its budget."""


class InsufficientSample(DepScreenError):
    pass


class NonPositiveVariance(DepScreenError):
    pass


class AlphaOutOfRange(DepScreenError):
    pass


class NegativeEigenvalue(DepScreenError):
    pass


class InsufficientResamples(DepScreenError):
    pass


class EmptyGrid(DepScreenError):
    pass


class ZeroSum(DepScreenError):
    pass


class UnsupportedMeasure(DepScreenError):
    pass


class DegeneratePredictor(DepScreenError):
    pass


class ZeroModel(DepScreenError):
    pass


class InternalConsistencyError(DepScreenError):
    """A quantity that is non-negative in exact arithmetic came out clearly negative."""


class ParseError(DepScreenError):
    pass


class SchemaError(DepScreenError):
    pass
