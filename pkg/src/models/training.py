"""
Training configuration and report dataclasses
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .projection_config import ProjectionConfig


@dataclass(frozen=True)
class Placement:
    """
    Stages (f, r) at which the forward and reverse projections are applied.

    Stage 0 is the input X, stage k is the output of layer k. The embedding at
    stage f is forward-projected; the embedding at stage r is reverse-projected.
    """
    forward_stage: int
    reverse_stage: int

    def validate(self, num_layers: int) -> tuple[bool, Optional[str]]:
        if not 0 <= self.forward_stage <= self.reverse_stage <= num_layers:
            return False, (
                f"Placement ({self.forward_stage},{self.reverse_stage}) must satisfy "
                f"0 <= f <= r <= {num_layers}"
            )
        return True, None

    @classmethod
    def parse(cls, text: str, num_layers: int) -> Optional['Placement']:
        """
        Parse 'none', 'auto' or 'f,r'.

        'auto' means (0, num_layers).
        """
        text = text.strip().lower()
        if text == "none":
            return None
        if text == "auto":
            return cls(0, num_layers)
        parts = text.split(",")
        if len(parts) != 2:
            raise ValueError(f"Placement must be 'none', 'auto' or 'f,r', got {text!r}")
        return cls(int(parts[0]), int(parts[1]))

    def __str__(self) -> str:
        return f"{self.forward_stage},{self.reverse_stage}"


@dataclass(frozen=True)
class MlpConfig:
    """
    Feed-forward network shape.

    Attributes:
        layer_dims: [C0, C1, ..., Cl]; l = len(layer_dims) - 1 linear layers
        dropout_rate: Dropout applied after every hidden activation, in [0, 1)
        activation: Only 'relu' is supported
        seed: Seed for parameter initialization
    """
    layer_dims: tuple[int, ...]
    dropout_rate: float = 0.0
    activation: str = "relu"
    seed: int = 0

    @property
    def num_layers(self) -> int:
        return len(self.layer_dims) - 1

    def validate(self) -> tuple[bool, Optional[str]]:
        if len(self.layer_dims) < 2:
            return False, "At least one layer is required"
        if any(d < 1 for d in self.layer_dims):
            return False, "All layer dimensions must be at least 1"
        if not 0.0 <= self.dropout_rate < 1.0:
            return False, "Dropout rate must lie in [0, 1)"
        if self.activation != "relu":
            return False, f"Unsupported activation {self.activation!r}"
        return True, None


@dataclass(frozen=True)
class PipelineConfig:
    """
    Encoder shape: layer count, hidden width, projection and its placement.

    Attributes:
        layers: Number of linear layers l
        hidden: Width of every hidden layer
        projection: Projection matrix settings
        placement: Stages (f, r), or None for a plain MLP
    """
    layers: int = 2
    hidden: int = 64
    projection: ProjectionConfig = field(default_factory=ProjectionConfig)
    placement: Optional[Placement] = None

    def layer_dims(self, num_features: int, num_classes: int) -> tuple[int, ...]:
        return (num_features,) + (self.hidden,) * (self.layers - 1) + (num_classes,)

    def to_dict(self) -> dict:
        return {
            'layers': self.layers,
            'hidden': self.hidden,
            'projection': self.projection.to_dict(),
            'placement': str(self.placement) if self.placement is not None else 'none',
        }


@dataclass(frozen=True)
class TrainHyperparams:
    """Optimizer and schedule settings for one training run"""
    lr: float = 0.01
    weight_decay: float = 0.0005
    dropout: float = 0.5
    epochs: int = 500
    seed: int = 0
    float32: bool = False

    def validate(self) -> tuple[bool, Optional[str]]:
        if not self.lr > 0:
            return False, "Learning rate must be positive"
        if self.weight_decay < 0:
            return False, "Weight decay must be non-negative"
        if not 0.0 <= self.dropout < 1.0:
            return False, "Dropout rate must lie in [0, 1)"
        if self.epochs < 1:
            return False, "At least one epoch is required"
        return True, None

    def to_dict(self) -> dict:
        return {
            'lr': self.lr,
            'weight_decay': self.weight_decay,
            'dropout': self.dropout,
            'epochs': self.epochs,
            'seed': self.seed,
            'float32': self.float32,
        }


@dataclass(frozen=True)
class SplitResult:
    """Outcome of training on a single split"""
    test_accuracy: float
    best_val_accuracy: float
    best_val_epoch: int
    train_accuracy: float
    final_loss: float
    final_train_accuracy: float = 0.0
    loss_history: tuple[float, ...] = ()


@dataclass
class TrainReport:
    """
    Aggregate over all splits of one configuration.

    std_accuracy is the population standard deviation over the splits.
    """
    per_split_test_accuracy: list[float]
    best_val_epoch: list[int]
    best_val_accuracy: list[float]
    train_accuracy: list[float]
    final_train_accuracy: list[float] = field(default_factory=list)
    epochs_run: list[int] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @classmethod
    def from_results(cls, results: list[SplitResult], config: dict) -> 'TrainReport':
        return cls(
            per_split_test_accuracy=[r.test_accuracy for r in results],
            best_val_epoch=[r.best_val_epoch for r in results],
            best_val_accuracy=[r.best_val_accuracy for r in results],
            train_accuracy=[r.train_accuracy for r in results],
            final_train_accuracy=[r.final_train_accuracy for r in results],
            epochs_run=[len(r.loss_history) for r in results],
            config=config,
        )

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.per_split_test_accuracy))

    @property
    def std_accuracy(self) -> float:
        return float(np.std(self.per_split_test_accuracy))

    @property
    def mean_val_accuracy(self) -> float:
        return float(np.mean(self.best_val_accuracy))

    def to_dict(self) -> dict:
        return {
            'per_split_test_accuracy': self.per_split_test_accuracy,
            'mean_accuracy': self.mean_accuracy,
            'std_accuracy': self.std_accuracy,
            'best_val_epoch': self.best_val_epoch,
            'best_val_accuracy': self.best_val_accuracy,
            'mean_val_accuracy': self.mean_val_accuracy,
            'train_accuracy': self.train_accuracy,
            'final_train_accuracy': self.final_train_accuracy,
            'epochs_run': self.epochs_run,
            'config': self.config,
        }
