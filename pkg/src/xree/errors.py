"""Exception types shared across the package."""


class XreeError(Exception):
    """Base class for all package-specific errors."""


class InvalidStateError(XreeError):
    """Input does not describe a valid quantum state."""


class NotInFamilyError(InvalidStateError):
    """Density matrix lies outside the supported X-like family.

    Carries the list of offending (row, col, magnitude) entries so callers
    can report exactly which matrix elements break the sparsity pattern.
    """

    def __init__(self, message, entries):
        super().__init__(message)
        self.entries = list(entries)


class SingularPhaseError(InvalidStateError):
    """cos(phi) is too close to zero to recover the coherence magnitude.

    The caller should supply the coherence magnitude directly instead of
    deriving it from correlation components.
    """


class WrongBranchError(XreeError):
    """A branch solver was called on a state outside its precondition."""


class LogDomainError(XreeError):
    """A logarithm argument left its domain (candidate state not PSD)."""


class NumericalError(XreeError):
    """An iterative numerical procedure failed to converge."""
