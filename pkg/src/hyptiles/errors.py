"""Exception types shared across the package."""


class GeometryError(Exception):
    """A geometric precondition is violated (wrong pair class, bad point, ...)."""


class SpecError(Exception):
    """A group-spec file or builtin name cannot be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = "line {}: {}".format(line, message)
        super().__init__(message)
        self.line = line


class ResourceLimitError(Exception):
    """An enumeration or search exceeded its configured resource budget."""


class SearchInconclusive(Exception):
    """A capped search ran out of budget without finding a witness.

    This is a resource outcome, not a geometric statement: the object searched
    for may well exist beyond the caps.
    """
