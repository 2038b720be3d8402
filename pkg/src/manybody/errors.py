"""Exception types raised across the package.

Everything derives from :class:`ManybodyError` so callers (notably the CLI)
can catch one base class and map failures to exit codes.
"""


class ManybodyError(Exception):
    """Base class for all errors raised by this package."""


class InvalidTensorError(ManybodyError, ValueError):
    """Input array violates the tensor contract (negative, non-finite, empty)."""


class ShapeMismatchError(ManybodyError, ValueError):
    """Two tensors (or a tensor and an index set) disagree on shape/order."""


class SizeMismatchError(ManybodyError, ValueError):
    """Reshape target has a different number of entries."""


class ZeroTensorError(ManybodyError, ValueError):
    """Operation requires a nonzero tensor (total sum or norm is zero)."""


class SupportViolationError(ManybodyError, ValueError):
    """KL divergence undefined: p > 0 somewhere q = 0."""


class NotNormalizedError(ManybodyError, ValueError):
    """Operation requires a tensor whose entries sum to one."""


class ZeroEntryError(ManybodyError, ValueError):
    """Log-domain transform requires strictly positive entries."""


class InvalidEtaError(ManybodyError, ValueError):
    """Expectation-parameter array does not describe a non-negative tensor."""


class LogDomainOverflowError(ManybodyError, OverflowError):
    """Cumulative log-values left the double range even after max-subtraction."""


class BadOrderError(ManybodyError, ValueError):
    """Tensor order / interaction-order argument out of range."""


class BadModesError(ManybodyError, ValueError):
    """Mode subset is empty or refers to modes outside the tensor."""


class ModeOutOfRangeError(ManybodyError, ValueError):
    """Interaction specification names a mode outside 1..D."""


class SpecParseError(ManybodyError, ValueError):
    """Interaction/init specification text is malformed.

    Attributes
    ----------
    position : int
        Character offset of the offending token in the input string.
    """

    def __init__(self, message, position=0):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class EmptyMaskError(ManybodyError, ValueError):
    """Metric mask selects no entries."""


class EmptyObservationError(ManybodyError, ValueError):
    """Completion input has no observed entries."""


class SingularSystemError(ManybodyError, RuntimeError):
    """Newton system unsolvable even after the damping ladder."""


class NotConvergedError(ManybodyError, RuntimeError):
    """Iteration budget exhausted before reaching tolerance (oracle only;
    the projection solver reports non-convergence as a flagged result)."""


class OffModelError(ManybodyError, ValueError):
    """Natural parameters carry mass outside the interaction set."""


class NotCyclicError(ManybodyError, ValueError):
    """Ring-core export requires factors of the cyclic pair structure."""


class TensorFileError(ManybodyError, ValueError):
    """Tensor file is malformed (header, token count, or value domain)."""
