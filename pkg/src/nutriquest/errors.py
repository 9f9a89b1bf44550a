"""Shared exception types.

Every module raises these rather than bare ValueError so the CLI can map
failures onto its documented exit codes (parse errors -> 2, domain
errors -> 3).
"""


class NutriquestError(Exception):
    """Base class for all package errors."""


class DomainError(NutriquestError):
    """Input violates a mathematical or physical precondition."""


class ReferenceGapError(DomainError):
    """No growth-reference row covers the requested indicator/sex/key."""


class ContractViolationError(NutriquestError):
    """A caller broke an inter-module contract (e.g. scoring an unscreened
    measurement, out-of-order streak dates)."""


class ParseError(NutriquestError):
    """A delimited/config file failed to parse.

    Carries enough position info for the CLI's line/column diagnostics.
    """

    def __init__(self, message, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        loc = ""
        if path is not None:
            loc = f"{path}:"
        if line is not None:
            loc += f"{line}:"
        if column is not None:
            loc += f"{column}:"
        super().__init__(f"{loc} {message}" if loc else message)


class SearchOverflowError(DomainError):
    """An iterative search (e.g. sample-size) exceeded its hard bound."""
