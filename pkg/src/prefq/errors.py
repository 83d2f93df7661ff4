"""Exception types shared across the package."""


class PrefqError(Exception):
    """Base class for all errors raised by prefq."""


class ValidationError(PrefqError, ValueError):
    """A schema, statement or profile violates a structural invariant."""


class CapacityError(PrefqError):
    """A materialization would exceed the configured size limit."""


class SourceError(PrefqError):
    """An error tied to a position in some source text."""

    def __init__(self, message, text=None, pos=None):
        self.message = message
        self.pos = pos
        self.line = self.col = None
        if text is not None and pos is not None:
            self.line = text.count("\n", 0, pos) + 1
            self.col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(self._render())

    def _render(self):
        if self.line is None:
            return self.message
        return f"{self.message} (line {self.line}, column {self.col})"


class ParseError(SourceError):
    """Malformed input: query, formula, preference file or graph file."""


class SemanticError(SourceError):
    """Well-formed input referring to unknown propositions or stakeholders."""


class FormulaError(PrefqError):
    """A mu-calculus formula is outside the supported fragment or has unbound variables."""


class EvaluationTimeout(PrefqError):
    """An evaluation exceeded its deadline."""
