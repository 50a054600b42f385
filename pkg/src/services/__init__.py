"""
Services package
"""

from .hypergraph_ops import build_incidence, degrees, adjacency, clique_expansion, homophily_score
from .projection import (
    ProjectionMatrix,
    normalize,
    build_projection,
    project_forward,
    project_reverse,
    compound,
)
from .neuralnet import (
    Mode,
    ForwardCache,
    EncoderPipeline,
    AdamState,
    mlp_forward,
    cross_entropy_masked,
    backward,
    accuracy,
    adam_step,
)
from .dataset_store import load_dataset, save_dataset, dataset_to_dict
from .splitter import make_splits
from .synthetic import (
    SynthResult,
    synth_extend,
    synth_graph,
    one_hot_gaussian_features,
    blob_dataset,
    random_label_graph,
)
from .trainer import Trainer, train
from .sweep_runner import SweepRunner, TrialResult, expand_grid
from .report_writer import canonicalize, to_canonical_json, write_report
from .run_logger import RunLogger

__all__ = [
    "build_incidence",
    "degrees",
    "adjacency",
    "clique_expansion",
    "homophily_score",
    "ProjectionMatrix",
    "normalize",
    "build_projection",
    "project_forward",
    "project_reverse",
    "compound",
    "Mode",
    "ForwardCache",
    "EncoderPipeline",
    "AdamState",
    "mlp_forward",
    "cross_entropy_masked",
    "backward",
    "accuracy",
    "adam_step",
    "load_dataset",
    "save_dataset",
    "dataset_to_dict",
    "make_splits",
    "SynthResult",
    "synth_extend",
    "synth_graph",
    "one_hot_gaussian_features",
    "blob_dataset",
    "random_label_graph",
    "Trainer",
    "train",
    "SweepRunner",
    "TrialResult",
    "expand_grid",
    "canonicalize",
    "to_canonical_json",
    "write_report",
    "RunLogger",
]
