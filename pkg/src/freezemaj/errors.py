"""Exception types shared across the package."""


class FreezemajError(Exception):
    """Base class for all package errors."""


class OffsetCollision(FreezemajError):
    """Two neighborhood offsets on the same axis coincide modulo n."""


class CellOutOfRange(FreezemajError):
    """A cell coordinate lies outside the grid."""


class WrongNeighborhoodArity(FreezemajError):
    """An operation requiring |S_N| = |S_E| = 1 got larger sets."""


class InstanceTooLarge(FreezemajError):
    """Instance exceeds the size cap of the matrix-power reference predictor."""


class ParseError(FreezemajError):
    """A text input failed to parse; carries the offending line number."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class FamilyOutOfRange(FreezemajError):
    """Neighborhood family parameters violate the family's constraints."""


class GadgetConstructionFailed(FreezemajError):
    """A constructed tile did not pass its functional contract."""


class LayoutOverflow(FreezemajError):
    """Circuit layout exceeds the configured maximum grid size."""
