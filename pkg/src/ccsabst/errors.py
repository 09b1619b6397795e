"""Exception hierarchy shared by all ccsabst modules."""


class CcsError(Exception):
    """Base class for all errors raised by this package."""


class UndefinedConstantError(CcsError):
    def __init__(self, name: str):
        super().__init__(f"undefined process constant: {name}")
        self.name = name


class TruncatedLtsError(CcsError):
    """Raised when an operation refuses a truncated transition system."""


class ParseError(CcsError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class PathError(CcsError):
    """A subterm path does not resolve against the family."""


class RuleError(CcsError):
    """A rewrite rule does not match or its side condition fails."""


class FormulaError(CcsError):
    """Ill-formed mu-calculus formula (open, or bad modality labels)."""
