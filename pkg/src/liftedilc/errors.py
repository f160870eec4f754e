"""Exception types shared across the package.

Numerical failure modes (divergent iterations, rank deficiency, asymmetric
matrices handed to the symmetric eigensolver) get their own exception classes
so callers can react to them individually; the CLI maps them onto exit codes.
"""


class LiftedIlcError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(LiftedIlcError, ValueError):
    """A scalar argument is outside its admissible range."""


class DimensionError(LiftedIlcError, ValueError):
    """Vector or matrix operands have incompatible shapes."""


class EmptyHorizonError(InvalidParameterError):
    """A lifted system was requested with zero time steps."""


class DegenerateDeletionError(InvalidParameterError):
    """Row deletion would remove every row of the lifted system."""


class EmptyInputError(InvalidParameterError):
    """An operation received an empty trajectory."""


class UndefinedDbError(InvalidParameterError):
    """Decibel conversion of a non-positive value."""


class SingularSystemError(LiftedIlcError):
    """The plant has no input-output coupling (all Markov parameters zero)."""


class RankDeficiencyError(LiftedIlcError):
    """A matrix expected to have full row rank does not.

    The numerical rank found at the configured tolerance is stored on the
    exception so callers can report how degenerate the problem actually is.
    """

    def __init__(self, message, numerical_rank):
        super().__init__(message)
        self.numerical_rank = numerical_rank


class NotSymmetricError(LiftedIlcError):
    """A matrix required to be symmetric is not, beyond tolerance."""


class DivergenceError(LiftedIlcError):
    """Eigenvalues outside the convergent range; iteration would diverge."""


class ConfigError(LiftedIlcError):
    """An experiment configuration file is missing, malformed, or invalid."""
