"""Exception hierarchy shared across the package.

DomainError maps to CLI exit code 2 (bad mathematical input, e.g. a line
that is not on the hypersurface), ConsistencyError to exit code 3
(internal invariants violated, which for well-formed inputs should never
happen).
"""


class FanoStrataError(Exception):
    pass


class FieldMismatchError(FanoStrataError):
    """Two exact values from different coefficient fields were combined."""


class DomainError(FanoStrataError):
    """Input is well-formed but outside the mathematical domain."""


class LineNotOnSurface(DomainError):
    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"line is not contained in the hypersurface; "
                         f"restriction is {residual}")


class SingularAlongLine(DomainError):
    """The first partials restricted to the line share a zero."""


class ConsistencyError(FanoStrataError):
    """An exact internal identity failed; signals corrupt input data."""
