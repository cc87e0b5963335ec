"""Exception hierarchy for transfunction analyses."""


class TransfunctionError(ValueError):
    """Base class for all errors raised by this package."""


class UnknownPointError(TransfunctionError):
    """A point id does not belong to the space."""

    def __init__(self, point: int, size: int):
        self.point = point
        super().__init__(f"unknown point: {point} (space has {size} points)")


class SpaceMismatchError(TransfunctionError):
    """Two objects live on different spaces."""


class SignedMeasureError(TransfunctionError):
    """A signed measure was passed where a nonnegative one is required."""


class EmptySupportError(TransfunctionError):
    """An operation needs a nonempty point set."""


class NotOrthogonalError(TransfunctionError):
    """Two measures in a family share a support point."""

    def __init__(self, i: int, j: int):
        self.indices = (i, j)
        super().__init__(f"measures {i} and {j} are not orthogonal")


class LocalizationError(TransfunctionError):
    """A transfunction is not localized where a construction needs it."""

    def __init__(self, message: str, points: list[int] | None = None):
        self.points = points or []
        super().__init__(message)


class MollificationError(TransfunctionError):
    """Mollification was requested on a space without translation structure."""


class MarkovError(TransfunctionError):
    """A Markov operator, transport plan or its preconditions are invalid."""

    def __init__(self, message: str, witness: str | None = None):
        self.witness = witness
        super().__init__(f"{message} ({witness})" if witness else message)


class ScenarioError(TransfunctionError):
    """A scenario file is malformed or has unresolved references."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
