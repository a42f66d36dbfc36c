"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`SpringLinkageError`, so callers (and the CLI) can map families of
failures onto exit codes without string matching.
"""


class SpringLinkageError(Exception):
    """Base class for all package errors."""


class DomainError(SpringLinkageError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class SingularityError(SpringLinkageError, ArithmeticError):
    """A closed form is singular at the requested knee angle."""

    def __init__(self, message, angle=None):
        super().__init__(message)
        self.angle = angle


class ConfigurationError(SpringLinkageError, ValueError):
    """A spring or linkage configuration is physically inadmissible."""


class UnsolvableError(SpringLinkageError):
    """No stiffness can bring the peak charging force to the budget."""


class InsufficientDataError(SpringLinkageError):
    """A catalogue record lacks the fields a prediction needs."""


class CatalogueError(SpringLinkageError, ValueError):
    """A catalogue row failed to parse."""

    def __init__(self, message, row=None, field=None):
        super().__init__(message)
        self.row = row
        self.field = field
