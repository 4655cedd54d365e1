"""Exception classes shared across the package.

The CLI maps these onto distinct exit codes (see cli.py), so new error
types should subclass one of the four roots: ConfigError, SamplingError,
NumericError, DataFormatError.
"""


class ConfigError(Exception):
    """Invalid or inconsistent configuration."""


class InvalidLambdaError(ConfigError):
    """Filter rate clashes with a real lattice eigenvalue (lambda == -mu)."""


class SamplingError(Exception):
    """Data-generation failure."""


class SamplingStarvedError(SamplingError):
    """Rejection sampling hit the attempt cap.

    ``tightest`` names the filter that rejected the most draws.
    """

    def __init__(self, message: str, tightest: str):
        super().__init__(message)
        self.tightest = tightest


class NumericError(Exception):
    """Numerical failure in a fitting or simulation routine."""


class EigensolverError(NumericError):
    """Hermitian eigendecomposition failed or left a large residual."""


class RankDeficiencyError(NumericError):
    """Singular normal matrix in a least-squares solve."""


class NotPositiveDefiniteError(NumericError):
    """Symmetric factorization failed; matrix is not positive definite."""


class DegenerateEigenfunctionError(NumericError):
    """Fitted eigenfunction vanishes on the data."""


class IntegrationDivergedError(NumericError):
    """Integrator produced a non-finite state. ``time`` is the failing time."""

    def __init__(self, message: str, time: float):
        super().__init__(message)
        self.time = time


class PeriodUndetectedError(NumericError):
    """Fewer than three oscillation maxima found in the probe trajectory."""


class DataFormatError(Exception):
    """Problem with an on-disk dataset or model file."""


class ParseError(DataFormatError):
    """Malformed file content. ``line`` is the 1-based offending line."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class SchemaError(DataFormatError):
    """File parses but its header/shape does not match the expected schema."""
