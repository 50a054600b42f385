"""
Full-batch training of the encoder pipeline over dataset splits
"""

import logging
import threading
from dataclasses import replace
from typing import Optional, Sequence

import numpy as np

from ..exceptions import DivergenceError, UnigError
from ..models.dataset import Dataset, Split
from ..models.projection_config import ProjectionConfig
from ..models.training import (
    MlpConfig,
    PipelineConfig,
    SplitResult,
    TrainHyperparams,
    TrainReport,
)
from .neuralnet import (
    AdamState,
    EncoderPipeline,
    Mode,
    accuracy,
    adam_step,
    backward,
    cross_entropy_masked,
    mlp_forward,
)
from .projection import ProjectionMatrix, build_projection

logger = logging.getLogger(__name__)


class Trainer:
    """Service for training encoder pipelines on one dataset"""

    def __init__(self, dataset: Dataset):
        """
        Initialize Trainer for a dataset

        Args:
            dataset: Dataset whose features, labels and structure are used
        """
        self.dataset = dataset
        self._projections: dict[tuple[ProjectionConfig, type], ProjectionMatrix] = {}
        self._projections_lock = threading.Lock()

    def projection_for(self, cfg: ProjectionConfig, dtype: type = np.float64) -> ProjectionMatrix:
        """Build (or reuse) the projection matrix for a configuration"""
        key = (cfg, dtype)
        # sweep trials share one Trainer across worker threads
        with self._projections_lock:
            if key not in self._projections:
                pm = build_projection(self.dataset.structure, cfg)
                if dtype is not np.float64:
                    pm = replace(
                        pm,
                        forward=pm.forward.astype(dtype),
                        reverse=pm.reverse.astype(dtype),
                        forward_t=pm.forward_t.astype(dtype),
                        reverse_t=pm.reverse_t.astype(dtype),
                    )
                self._projections[key] = pm
            return self._projections[key]

    def build_pipeline(self, pipeline_config: PipelineConfig, hyperparams: TrainHyperparams,
                       init_seed: int) -> EncoderPipeline:
        """Fresh pipeline with seeded parameters"""
        dtype = np.float32 if hyperparams.float32 else np.float64
        mlp = MlpConfig(
            layer_dims=pipeline_config.layer_dims(self.dataset.num_features, self.dataset.num_classes),
            dropout_rate=hyperparams.dropout,
            seed=init_seed,
        )
        projection = None
        if pipeline_config.placement is not None:
            projection = self.projection_for(pipeline_config.projection, dtype)
        return EncoderPipeline.initialize(mlp, projection=projection,
                                          placement=pipeline_config.placement, dtype=dtype)

    def train(self, split: Split, pipeline_config: PipelineConfig,
              hyperparams: TrainHyperparams, split_index: int = 0) -> SplitResult:
        """
        Train on one split and pick the epoch with the best validation accuracy.

        Each epoch runs a train-mode forward pass, the masked loss on training
        nodes, backward and one Adam step, then evaluates without dropout. Ties
        in validation accuracy keep the earliest epoch.

        Args:
            split: Train/val/test node indices
            pipeline_config: Encoder shape and projection placement
            hyperparams: Optimizer settings, epochs and seed
            split_index: Mixed into the seed so splits get distinct initializations

        Returns:
            SplitResult at the selected epoch

        Raises:
            DivergenceError: the training loss became non-finite
        """
        is_valid, error = hyperparams.validate()
        if not is_valid:
            raise UnigError(error)
        is_valid, error = split.validate(self.dataset.num_nodes)
        if not is_valid:
            raise UnigError(error)

        init_seq, dropout_seq = np.random.SeedSequence([hyperparams.seed, split_index]).spawn(2)
        pipeline = self.build_pipeline(pipeline_config, hyperparams,
                                       int(init_seq.generate_state(1)[0]))
        rng = np.random.default_rng(dropout_seq)

        dtype = np.float32 if hyperparams.float32 else np.float64
        x = self.dataset.features.astype(dtype)
        labels = self.dataset.labels.labels
        state = AdamState.for_params(pipeline.params, hyperparams.lr, hyperparams.weight_decay)

        best_val, best_epoch, test_at_best, train_at_best = -1.0, 0, 0.0, 0.0
        losses = []
        for epoch in range(1, hyperparams.epochs + 1):
            logits, cache = mlp_forward(pipeline, x, Mode.TRAIN, rng)
            loss, dlogits = cross_entropy_masked(logits, labels, split.train)
            if not np.isfinite(loss):
                raise DivergenceError(epoch, loss, split_index)
            losses.append(loss)

            grads = backward(pipeline, cache, dlogits)
            params, state = adam_step(state, pipeline.params, grads)
            pipeline.set_params(params)

            eval_logits, _ = mlp_forward(pipeline, x, Mode.EVAL)
            val_acc = accuracy(eval_logits, labels, split.val)
            if val_acc > best_val:
                best_val, best_epoch = val_acc, epoch
                test_at_best = accuracy(eval_logits, labels, split.test)
                train_at_best = accuracy(eval_logits, labels, split.train)
            logger.debug(f"split {split_index} epoch {epoch}: loss={loss:.6f} val={val_acc:.4f}")

        logger.info(
            f"Split {split_index}: test={test_at_best:.4f} at epoch {best_epoch} "
            f"(val={best_val:.4f}, train={train_at_best:.4f})"
        )
        return SplitResult(
            test_accuracy=test_at_best,
            best_val_accuracy=best_val,
            best_val_epoch=best_epoch,
            train_accuracy=train_at_best,
            final_loss=losses[-1],
            final_train_accuracy=accuracy(eval_logits, labels, split.train),
            loss_history=tuple(losses),
        )

    def run(self, splits: Sequence[Split], pipeline_config: PipelineConfig,
            hyperparams: TrainHyperparams, config_echo: Optional[dict] = None) -> TrainReport:
        """Train once per split and aggregate into a TrainReport"""
        results = [
            self.train(split, pipeline_config, hyperparams, split_index=i)
            for i, split in enumerate(splits)
        ]
        echo = {
            'dataset': self.dataset.name,
            'pipeline': pipeline_config.to_dict(),
            'hyperparams': hyperparams.to_dict(),
        }
        echo.update(config_echo or {})
        report = TrainReport.from_results(results, echo)
        logger.info(
            f"{self.dataset.name}: mean test accuracy {report.mean_accuracy:.4f} "
            f"± {report.std_accuracy:.4f} over {len(results)} splits"
        )
        return report


def train(dataset: Dataset, split: Split, pipeline_config: PipelineConfig,
          hyperparams: TrainHyperparams) -> SplitResult:
    """Train a single split without keeping a Trainer around"""
    return Trainer(dataset).train(split, pipeline_config, hyperparams)
