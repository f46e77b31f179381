"""Exception hierarchy shared by every qdom module."""


class QdomError(Exception):
    """Base class for all qdom errors."""


class ShapeError(QdomError, ValueError):
    """A table or matrix has the wrong dimensions or out-of-range entries."""


class QuantaleMismatch(QdomError, ValueError):
    pass


class TypeMismatch(QdomError, TypeError):
    """Module or functor endpoints do not line up."""


class InvalidStructure(QdomError, ValueError):
    """A structure failed validation; ``violations`` lists what broke."""

    def __init__(self, what, violations):
        self.violations = list(violations)
        shown = "; ".join(self.violations[:5])
        more = f" (+{len(self.violations) - 5} more)" if len(self.violations) > 5 else ""
        super().__init__(f"invalid {what}: {shown}{more}")


class ResourceLimitError(QdomError, RuntimeError):
    """An enumeration would exceed a configured cap."""

    def __init__(self, what, cap):
        self.what = what
        self.cap = cap
        super().__init__(f"{what} exceeds cap {cap}")


class NotCocomplete(QdomError, ValueError):
    pass


class NotMember(QdomError, ValueError):
    """A module was expected to lie in an ideal family but does not."""


class TheoremViolation(QdomError, AssertionError):
    """A statement that must hold on accepted instances failed; carries a witness."""

    def __init__(self, statement, witness):
        self.statement = statement
        self.witness = witness
        super().__init__(f"{statement} fails at {witness}")


class ParseError(QdomError, ValueError):
    def __init__(self, message, line, column=1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
