"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class RangeError(ArithmeticError):
    """A result cannot be represented in double precision."""


class BudgetError(ValueError):
    """A requested computation exceeds the enumeration budget."""


class SplitRequired(ValueError):
    """An interval straddles a discontinuity of the majorant h1.

    The caller is expected to split the box (or evaluate each branch piece
    separately) and retry.
    """

    def __init__(self, message, variable="u"):
        super().__init__(message)
        self.variable = variable
