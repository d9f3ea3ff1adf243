"""Error types shared across the package.

Two failure families are distinguished because the command line maps them to
different exit codes: bad inputs (exit 2) versus blown resource budgets
(exit 3).
"""


class ParameterError(ValueError):
    """An argument is outside its documented domain."""


class ResourceError(RuntimeError):
    """A computation would exceed a configured memory/precision/size budget."""
