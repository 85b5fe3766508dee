class SchemeInvariantError(ValueError):
    """
    ### Description:

    Raised when a kick scheme, symmetric scheme or family instance breaks one of its structural invariants (zero
    pulse-pair count in a group, an empty group list, mismatched counts).
    """


class SchemeOrderingError(SchemeInvariantError):
    """
    ### Description:

    Raised when group times are not strictly increasing or when the symmetric delays violate
    \\(\\tau_1 > \\tau_2 > \\tau_3 > 0\\).
    """


class DomainError(ValueError):
    """
    ### Description:

    Raised for inputs outside the domain of an operation: unknown labels, non-positive grids, bad bounds or a
    delay vector of the wrong length.
    """


class SchemeCancellationError(DomainError):
    """
    ### Description:

    Raised when every pulse pair of a scheme meets an opposite-direction pair at the same time, so that no net
    kick is left to build a `pyfastgate.core.kick_scheme.KickScheme` from.
    """


class SchemeParseError(ValueError):

    def __init__(self, message: str, line: int or None = None, column: int or None = None):
        """
        ### Description:

        Raised when a scheme, family, network or parameter document cannot be parsed. Carries the line and column
        of the offending character when the underlying JSON decoder reports them.

        ### Args:

        `message`: description of the problem

        `line`: 1-based line number, or `None`

        `column`: 1-based column number, or `None`
        """
        self.line = line
        self.column = column
        if line is not None:
            message = f'{message} (line {line}, column {column})'
        super().__init__(message)


class InfeasibleError(RuntimeError):
    """
    ### Description:

    Raised when no evaluated point satisfies the error budget, or when a robustness baseline is already outside it.
    """


class TruncationWarning(UserWarning):
    """Population reached the guard band of the truncated Fock space."""
