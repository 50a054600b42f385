"""
Dataset, split and synthesis settings
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from ..exceptions import DatasetFormatError, SplitError
from .hypergraph import Hypergraph, LabelVector


class DatasetKind(Enum):
    """Whether the structure is a plain graph or a hypergraph"""
    GRAPH = "graph"
    HYPERGRAPH = "hypergraph"


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    Node features, labels and structure of one benchmark.

    Attributes:
        name: Dataset name
        structure: Graph or hypergraph over the nodes
        features: |V| x C0 float matrix
        labels: Class per node
        kind: graph implies every edge has exactly two members
    """
    name: str
    structure: Hypergraph
    features: np.ndarray
    labels: LabelVector
    kind: DatasetKind

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        if features.ndim != 2:
            raise DatasetFormatError(f"Features of {self.name!r} must be a 2-D matrix")
        features = features.copy()
        features.setflags(write=False)
        object.__setattr__(self, "features", features)

        n = self.structure.num_nodes
        if features.shape[0] != n:
            raise DatasetFormatError(
                f"Dataset {self.name!r} has {features.shape[0]} feature rows but {n} nodes"
            )
        if len(self.labels) != n:
            raise DatasetFormatError(
                f"Dataset {self.name!r} has {len(self.labels)} labels but {n} nodes"
            )
        if not np.all(np.isfinite(features)):
            raise DatasetFormatError(f"Dataset {self.name!r} has non-finite features")
        if self.kind is DatasetKind.GRAPH and not self.structure.is_graph:
            raise DatasetFormatError(
                f"Dataset {self.name!r} is declared a graph but has edges larger than 2"
            )
        empty = self.labels.empty_classes()
        if n and empty:
            raise DatasetFormatError(
                f"Dataset {self.name!r} declares {self.labels.num_classes} classes "
                f"but classes {empty} have no nodes"
            )

    @property
    def num_nodes(self) -> int:
        return self.structure.num_nodes

    @property
    def num_features(self) -> int:
        return int(self.features.shape[1])

    @property
    def num_classes(self) -> int:
        return self.labels.num_classes

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.name == other.name
            and self.kind == other.kind
            and self.structure.canonical() == other.structure.canonical()
            and self.labels == other.labels
            and np.array_equal(self.features, other.features)
        )

    def with_structure(self, structure: Hypergraph, kind: DatasetKind,
                       name: Optional[str] = None) -> 'Dataset':
        """Copy of the dataset with new structure; features and labels unchanged"""
        return Dataset(
            name=name or self.name,
            structure=structure,
            features=self.features,
            labels=self.labels,
            kind=kind,
        )


class SplitProtocol(Enum):
    """How nodes are assigned to train/val/test"""
    PER_CLASS = "per-class"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class SplitSpec:
    """
    Split protocol with fractions and seed.

    Attributes:
        protocol: per-class or uniform
        fractions: (train, val, test), positive, summing to 1
        num_splits: Number of independent splits
        seed: Seed from which all splits are derived
    """
    protocol: SplitProtocol
    fractions: tuple[float, float, float]
    num_splits: int = 10
    seed: int = 0

    def __post_init__(self):
        if len(self.fractions) != 3 or any(f <= 0 for f in self.fractions):
            raise SplitError(f"Split fractions must be three positive numbers, got {self.fractions}")
        if not math.isclose(sum(self.fractions), 1.0, abs_tol=1e-9):
            raise SplitError(f"Split fractions must sum to 1, got {sum(self.fractions)}")
        if self.num_splits < 1:
            raise SplitError("num_splits must be at least 1")

    @classmethod
    def parse(cls, text: str, num_splits: int = 10, seed: int = 0) -> 'SplitSpec':
        """
        Parse 'per-class:0.48,0.32,0.2' or 'uniform:0.5,0.25,0.25'.
        """
        try:
            protocol, fractions = text.split(":", 1)
            values = tuple(float(x) for x in fractions.split(","))
            return cls(SplitProtocol(protocol.strip()), values, num_splits, seed)
        except ValueError as e:
            if isinstance(e, SplitError):
                raise
            raise SplitError(f"Cannot parse split protocol {text!r}: {e}") from e

    @classmethod
    def default_for(cls, kind: DatasetKind, num_splits: int = 10, seed: int = 0) -> 'SplitSpec':
        """48/32/20 per class for graphs, 50/25/25 uniform for hypergraphs"""
        if kind is DatasetKind.GRAPH:
            return cls(SplitProtocol.PER_CLASS, (0.48, 0.32, 0.2), num_splits, seed)
        return cls(SplitProtocol.UNIFORM, (0.5, 0.25, 0.25), num_splits, seed)

    def to_dict(self) -> dict:
        return {
            'protocol': self.protocol.value,
            'fractions': list(self.fractions),
            'num_splits': self.num_splits,
            'seed': self.seed,
        }


@dataclass(frozen=True, eq=False)
class Split:
    """Disjoint train/val/test node index arrays covering every node"""
    train: np.ndarray
    val: np.ndarray
    test: np.ndarray

    def validate(self, num_nodes: int) -> tuple[bool, Optional[str]]:
        parts = np.concatenate([self.train, self.val, self.test])
        if parts.size != num_nodes or np.unique(parts).size != num_nodes:
            return False, "Split parts must be disjoint and cover every node"
        if num_nodes and (parts.min() < 0 or parts.max() >= num_nodes):
            return False, "Split references nodes out of range"
        return True, None

    def __eq__(self, other) -> bool:
        if not isinstance(other, Split):
            return NotImplemented
        return (
            np.array_equal(self.train, other.train)
            and np.array_equal(self.val, other.val)
            and np.array_equal(self.test, other.test)
        )


@dataclass(frozen=True)
class SynthSpec:
    """
    Hyperedge growth settings.

    Attributes:
        rank: Target size r >= 2 of every grown hyperedge
        probability: Chance p that an added node is drawn from same-label candidates
        seed: Seed for the growth process
    """
    rank: int
    probability: float
    seed: int = 0

    def validate(self) -> tuple[bool, Optional[str]]:
        if self.rank < 2:
            return False, "Rank must be at least 2"
        if not 0.0 <= self.probability <= 1.0:
            return False, "Probability must lie in [0, 1]"
        return True, None
