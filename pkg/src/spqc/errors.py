"""Exception hierarchy shared by the simulator, model and training layers."""


class SpqcError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(SpqcError, ValueError):
    """Invalid sizes, shapes or option values."""


class QubitIndexError(SpqcError, IndexError):
    """A qubit index is out of range, repeated, or collides with the target."""


class StateError(SpqcError):
    """A state does not satisfy the precondition of an operation."""


class PostSelectionError(SpqcError):
    """The requested projection has (numerically) zero probability."""

    def __init__(self, probability, message=None):
        self.probability = float(probability)
        super().__init__(message or f"post-selection impossible: success probability {self.probability:.3e}")


class ForwardError(PostSelectionError):
    """Model forward pass failed because every branch amplitude vanished at ``x``."""

    def __init__(self, probability, x):
        self.x = x
        super().__init__(probability, f"forward pass failed at x={list(x)!r}: success probability {float(probability):.3e}")


class EstimationError(SpqcError):
    """No shots survived post-selection, so nothing can be estimated."""


class MetricError(SpqcError, ValueError):
    """A metric is undefined for the given inputs (e.g. R2 on constant targets)."""


class TrainingDivergedError(SpqcError):
    """Loss became NaN or exceeded the divergence threshold."""

    def __init__(self, epoch, loss):
        self.epoch = epoch
        self.loss = loss
        super().__init__(f"training diverged at epoch {epoch}: loss={loss!r}")


class DimensionError(SpqcError, ValueError):
    """Operands have incompatible sizes."""
