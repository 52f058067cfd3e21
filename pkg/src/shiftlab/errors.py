"""Exception types shared across the package."""


class ShiftlabError(Exception):
    """Base class for all errors raised by this package."""


class InputError(ShiftlabError, ValueError):
    """Malformed input: wrong shapes, non-finite entries, bad parameters."""


class ContainmentError(ShiftlabError):
    """A subspace claimed to sit inside another one does not.

    Carries the worst residual norm observed over the offending basis
    vectors in the ``residual`` attribute.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ModelError(ShiftlabError):
    """A model-construction contract is violated (e.g. a co-invariance check fails)."""


class EigenError(ShiftlabError):
    """No acceptable eigenpair: the best candidate's residual exceeds tolerance."""


class InternalConsistencyError(ShiftlabError):
    """Two independent computations of the same object disagree."""


class ConfigError(ShiftlabError):
    """Bad command-line arguments, unreadable files, or malformed scenario input."""
