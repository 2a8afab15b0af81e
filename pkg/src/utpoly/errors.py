"""Exception hierarchy shared by all utpoly modules."""


class UtpolyError(Exception):
    """Base class for every error raised by this package."""


class RingMismatch(UtpolyError, TypeError):
    pass


class KindMismatch(UtpolyError, TypeError):
    pass


class ZeroDenominator(UtpolyError, ZeroDivisionError):
    pass


class BadModulus(UtpolyError, ValueError):
    pass


class NotPrime(BadModulus):
    pass


class DimMismatch(UtpolyError, ValueError):
    pass


class NotUpperTriangular(UtpolyError, ValueError):
    pass


class BadInterval(UtpolyError, ValueError):
    pass


class IndexUnderflow(UtpolyError, ValueError):
    pass


class BudgetExceeded(UtpolyError, RuntimeError):
    """An exhaustive enumeration would visit more points than allowed."""

    def __init__(self, needed: int, budget: int):
        super().__init__(
            f"enumeration needs {needed} evaluation points, budget is {budget} "
            "(raise --budget or pass --force)"
        )
        self.needed = needed
        self.budget = budget


class ParseError(UtpolyError, ValueError):
    """Malformed polynomial text. ``position`` is a 0-based column."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position
