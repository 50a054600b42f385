"""
Domain models package
"""

from .base import Base, CreatedAtMixin
from .hypergraph import Hypergraph, IncidenceMatrix, DegreeVectors, LabelVector, HomophilyScore
from .projection_config import ProjectionConfig, WeightMode, Normalization
from .training import (
    Placement,
    MlpConfig,
    PipelineConfig,
    TrainHyperparams,
    SplitResult,
    TrainReport,
)
from .dataset import Dataset, DatasetKind, SplitProtocol, SplitSpec, Split, SynthSpec
from .run_config import (
    CommandConfig,
    HomophilyConfig,
    RunConfig,
    SweepConfig,
    SweepGrid,
    SynthConfig,
)
from .run_log import RunLog

__all__ = [
    "Base",
    "CreatedAtMixin",
    "Hypergraph",
    "IncidenceMatrix",
    "DegreeVectors",
    "LabelVector",
    "HomophilyScore",
    "ProjectionConfig",
    "WeightMode",
    "Normalization",
    "Placement",
    "MlpConfig",
    "PipelineConfig",
    "TrainHyperparams",
    "SplitResult",
    "TrainReport",
    "Dataset",
    "DatasetKind",
    "SplitProtocol",
    "SplitSpec",
    "Split",
    "SynthSpec",
    "CommandConfig",
    "HomophilyConfig",
    "RunConfig",
    "SweepConfig",
    "SynthConfig",
    "SweepGrid",
    "RunLog",
]
