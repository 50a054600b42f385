"""
Grid sweep over training hyperparameters and projection settings
"""

import asyncio
import itertools
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..exceptions import DivergenceError
from ..models.dataset import Split
from ..models.projection_config import Normalization, ProjectionConfig, WeightMode
from ..models.run_config import SweepGrid
from ..models.training import PipelineConfig, Placement, TrainHyperparams, TrainReport
from .trainer import Trainer

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrialResult:
    """One evaluated grid point"""
    key: str
    params: dict
    status: str
    mean_val_accuracy: Optional[float]
    mean_test_accuracy: Optional[float]

    def sort_key(self) -> tuple:
        val = self.mean_val_accuracy if self.mean_val_accuracy is not None else -1.0
        return (-val, self.key)

    def to_dict(self) -> dict:
        return {
            'key': self.key,
            'params': self.params,
            'status': self.status,
            'mean_val_accuracy': self.mean_val_accuracy,
            'mean_test_accuracy': self.mean_test_accuracy,
        }


def trial_key(params: dict) -> str:
    return json.dumps(params, sort_keys=True)


def expand_grid(grid: SweepGrid, max_trials: Optional[int] = None, seed: int = 0) -> list[dict]:
    """
    Every valid grid point in grid order, optionally subsampled.

    Points whose placement does not fit the layer count are skipped. When more
    than max_trials points remain, a seeded subset is kept in grid order.
    """
    axes = grid.axes()
    names = list(axes)
    points = []
    for values in itertools.product(*(axes[name] for name in names)):
        params = dict(zip(names, values))
        placement = Placement.parse(params['placement'], params['layers'])
        if placement is not None and not placement.validate(params['layers'])[0]:
            continue
        points.append(params)

    if max_trials is not None and len(points) > max_trials:
        rng = np.random.default_rng(seed)
        chosen = np.sort(rng.choice(len(points), size=max_trials, replace=False))
        points = [points[i] for i in chosen]
    return points


def trial_configs(params: dict, base: TrainHyperparams) -> tuple[PipelineConfig, TrainHyperparams]:
    """Turn one grid point into pipeline and optimizer settings"""
    pipeline = PipelineConfig(
        layers=params['layers'],
        hidden=params['hidden'],
        projection=ProjectionConfig(
            pv_weight=params['pv_weight'],
            pv_weight_mode=WeightMode(params['pv_weight_mode']),
            normalization=Normalization(params['norm']),
        ),
        placement=Placement.parse(params['placement'], params['layers']),
    )
    hyperparams = TrainHyperparams(
        lr=params['lr'],
        weight_decay=params['weight_decay'],
        dropout=params['dropout'],
        epochs=base.epochs,
        seed=base.seed,
        float32=base.float32,
    )
    return pipeline, hyperparams


class SweepRunner:
    """Evaluates grid points, possibly in parallel, and reruns the winner"""

    def __init__(self, trainer: Trainer, splits: Sequence[Split],
                 base: TrainHyperparams, sweep_splits: int = 2, max_workers: int = 1):
        """
        Initialize SweepRunner

        Args:
            trainer: Trainer bound to the dataset
            splits: All splits; trials use the first sweep_splits of them
            base: Supplies epochs, seed and precision for every trial
            sweep_splits: Number of splits each trial is evaluated on
            max_workers: Parallel trials (UNIG_THREADS)
        """
        self.trainer = trainer
        self.splits = list(splits)
        self.base = base
        self.sweep_splits = max(1, min(sweep_splits, len(self.splits)))
        self.max_workers = max_workers

    def _run_trial(self, params: dict) -> TrialResult:
        pipeline, hyperparams = trial_configs(params, self.base)
        key = trial_key(params)
        try:
            report = self.trainer.run(self.splits[:self.sweep_splits], pipeline, hyperparams)
        except DivergenceError as e:
            logger.warning(f"Trial {key} diverged: {e}")
            return TrialResult(key, params, "diverged", None, None)
        logger.info(f"Trial {key}: val={report.mean_val_accuracy:.4f}")
        return TrialResult(key, params, "ok", report.mean_val_accuracy, report.mean_accuracy)

    async def run(self, trials: Sequence[dict]) -> list[TrialResult]:
        """Evaluate every trial; results come back in trial order"""
        loop = asyncio.get_running_loop()
        logger.info(f"Sweeping {len(trials)} trials with {self.max_workers} worker(s)")
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            return list(await asyncio.gather(
                *(loop.run_in_executor(pool, self._run_trial, params) for params in trials)
            ))

    @staticmethod
    def leaderboard(results: Sequence[TrialResult]) -> list[TrialResult]:
        """Best validation accuracy first; ties go to the lexicographically first key"""
        return sorted(results, key=TrialResult.sort_key)

    def rerun_best(self, best: TrialResult) -> TrainReport:
        """Train the winning configuration on every split"""
        pipeline, hyperparams = trial_configs(best.params, self.base)
        return self.trainer.run(self.splits, pipeline, hyperparams,
                                config_echo={'trial': best.params})
