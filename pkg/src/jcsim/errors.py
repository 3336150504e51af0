"""Exception types shared by the state-vector machinery."""


class SimulatorError(Exception):
    """Base class for all simulator errors."""


class OccupationExceedsCutoff(SimulatorError):
    """An occupation number exceeds the per-mode truncation bound."""


class DimensionMismatch(SimulatorError):
    """Two states do not live in the same truncated Hilbert space."""


class CutoffMismatch(SimulatorError):
    """Tensor factors carry different per-mode cutoffs."""


class ZeroStateError(SimulatorError):
    """Renormalization of the zero vector was requested.

    Raised when a post-selection projects onto an outcome of probability
    zero, so there is no surviving state to renormalize.
    """


class ModeIndexOutOfRange(SimulatorError):
    """A mode index does not address any mode of the state."""
