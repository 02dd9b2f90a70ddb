class AperimetError(Exception):
    """Base class; the CLI maps every subclass to exit status 1."""


class BoundaryHit(AperimetError):
    """A star image lies exactly on the window boundary (non-generic placement)."""


class OverlappingSum(AperimetError):
    pass


class BudgetExceeded(AperimetError):
    pass


class NoPlacementMatches(AperimetError):
    pass


class ReconstructionFailed(AperimetError):
    pass


class ParseError(AperimetError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class DuplicateCell(ParseError):
    pass


class EmptyWindow(ParseError):
    pass
