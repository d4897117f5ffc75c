"""Exception types shared across the toolkit.

The CLI maps these onto process exit codes: configuration/parse problems
exit 2, numeric-domain problems exit 3, self-test failures exit 4.
"""


class QHTError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(QHTError):
    """Invalid run configuration or command-line usage."""


class StateFileError(ConfigError):
    """A state file failed to parse or does not describe a density operator."""


class NumericDomainError(QHTError):
    """An operation was called outside its numeric domain."""


class SingularSupportError(NumericDomainError):
    """A log or negative power hit an eigenvalue below the support cutoff."""

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class DimensionOverflowError(NumericDomainError):
    """A dense materialization would exceed the supported dimension."""


class DegenerateVarianceError(NumericDomainError):
    """A second-order expansion was requested for a zero-variance pair."""


class EigenConvergenceError(QHTError):
    """The eigensolver failed to converge.

    Carries the Frobenius norm of the off-diagonal part of the input so the
    failure can be diagnosed without re-running.
    """

    def __init__(self, message, offdiag_norm):
        super().__init__(f"{message} (off-diagonal Frobenius norm {offdiag_norm:.6e})")
        self.offdiag_norm = offdiag_norm
