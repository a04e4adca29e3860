"""Exception hierarchy shared by every stage of the compiler."""

from __future__ import annotations


class CiceroError(Exception):
    """Base class for all errors raised by this package."""


class SpecSyntaxError(CiceroError, ValueError):
    """A document is not well-formed JSON."""


class SchemaError(CiceroError, ValueError):
    """A document is well-formed but violates the expected shape.

    ``issues`` lists every violation found, not only the first one.
    """

    def __init__(self, message: str, issues: list[str] | None = None):
        self.issues = list(issues) if issues else [message]
        super().__init__(message if len(self.issues) <= 1 else "; ".join(self.issues))


class FieldReferenceError(SchemaError):
    """A field name is used that does not exist in the data schema."""

    def __init__(self, field: str, where: str = ""):
        self.field = field
        msg = f"unknown field {field!r}" + (f" referenced by {where}" if where else "")
        super().__init__(msg)


class UnknownRole(CiceroError, ValueError):
    def __init__(self, role: str):
        self.role = role
        super().__init__(f"unknown role {role!r}")


class IndexOutOfRange(CiceroError, IndexError):
    pass


class TypeMismatch(CiceroError, TypeError):
    pass


class NoSuchSubordinate(CiceroError, ValueError):
    pass


class NoPairRelation(CiceroError, ValueError):
    pass


class MissingOption(CiceroError, ValueError):
    pass


class InvalidReplacement(CiceroError, ValueError):
    pass


class UnsupportedAttribute(CiceroError, ValueError):
    """An option names an attribute the selected element cannot carry."""


class UnresolvableScale(CiceroError, ValueError):
    pass


class NoEmptySpace(CiceroError, ValueError):
    pass


class CompileError(CiceroError):
    """Wraps the error raised while applying one rule.

    ``rule_index`` is the rule's position in the Cicero spec as written.
    """

    def __init__(self, rule_index: int | None, cause: BaseException):
        self.rule_index = rule_index
        self.cause = cause
        where = f"rule {rule_index}" if rule_index is not None else "output validation"
        super().__init__(f"{where}: {type(cause).__name__}: {cause}")
