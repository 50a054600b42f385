"""
Exception hierarchy shared by the services and the command handler
"""

from typing import Optional


class UnigError(Exception):
    """Base class for every error raised by this package"""


class HypergraphError(UnigError, ValueError):
    """Structure violates the hypergraph invariants"""


class DatasetFormatError(UnigError, ValueError):
    """Dataset file is malformed or describes an invalid dataset"""


class ProjectionError(UnigError, ValueError):
    """Projection matrix cannot be built or normalized"""


class DimensionError(UnigError, ValueError):
    """Matrix shapes do not line up"""


class StaleCacheError(UnigError, RuntimeError):
    """Backward pass requested with a cache that no longer matches the parameters"""


class SplitError(UnigError, ValueError):
    """Split settings are invalid for the dataset"""


class SynthesisError(UnigError, ValueError):
    """Synthetic dataset cannot be generated from the given input"""


class DivergenceError(UnigError, ArithmeticError):
    """Training loss became non-finite"""

    def __init__(self, epoch: int, loss: float, split_index: Optional[int] = None):
        self.epoch = epoch
        self.loss = loss
        self.split_index = split_index
        where = f" on split {split_index}" if split_index is not None else ""
        super().__init__(f"Loss diverged to {loss} at epoch {epoch}{where}")


class SweepDivergenceError(DivergenceError):
    """Every trial of a sweep diverged, so there is no configuration to rerun"""

    def __init__(self, num_trials: int):
        self.num_trials = num_trials
        self.epoch = None
        self.loss = None
        self.split_index = None
        Exception.__init__(self, f"All {num_trials} sweep trials diverged; nothing to rerun")
