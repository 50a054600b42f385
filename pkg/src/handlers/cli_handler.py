"""
Command handler for the train, sweep, homophily and synth subcommands
"""

import argparse
import logging
import sys
from typing import Any, Optional

from pydantic import ValidationError

from ..config import Config
from ..database import Database
from ..exceptions import DivergenceError, SweepDivergenceError, UnigError
from ..models.dataset import Dataset, SplitSpec, SynthSpec
from ..models.projection_config import Normalization, ProjectionConfig, WeightMode
from ..models.run_config import (
    CommandConfig,
    HomophilyConfig,
    RunConfig,
    SweepConfig,
    SweepGrid,
    SynthConfig,
)
from ..models.training import PipelineConfig, Placement, TrainHyperparams
from ..services.dataset_store import load_dataset, save_dataset
from ..services.hypergraph_ops import homophily_score
from ..services.report_writer import write_report
from ..services.splitter import make_splits
from ..services.sweep_runner import SweepRunner, expand_grid
from ..services.synthetic import synth_extend, synth_graph
from ..services.trainer import Trainer

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DIVERGED = 2

COMMAND_CONFIGS: dict[str, type[CommandConfig]] = {
    "train": RunConfig,
    "sweep": SweepConfig,
    "homophily": HomophilyConfig,
    "synth": SynthConfig,
}


def _one_line(error: Exception) -> str:
    if isinstance(error, ValidationError):
        return "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}"
            for err in error.errors()
        )
    return " ".join(str(error).split())


def load_command_config(command: str, args: argparse.Namespace) -> CommandConfig:
    """
    Resolve the settings of one subcommand.

    Values come from the --config file when given; every flag that was set
    on the command line overrides the file.
    """
    model = COMMAND_CONFIGS[command]
    overrides = {name: value for name, value in vars(args).items() if name in model.model_fields}
    return model.from_sources(getattr(args, "config", None), overrides)


class CommandHandler:
    """Runs subcommands, writes their JSON reports and maps failures to exit codes"""

    def __init__(self, config: Config, database: Optional[Database] = None):
        """
        Initialize CommandHandler

        Args:
            config: Environment settings (thread cap, results database)
            database: Results database; when None and RESULTS_DATABASE_URL is
                set, one is opened per dispatched command
        """
        self.config = config
        self.database = database

    # ----- helpers -----------------------------------------------------------------

    @staticmethod
    def _pipeline_config(rc: RunConfig) -> PipelineConfig:
        placement = Placement.parse(rc.placement, rc.layers)
        if placement is not None:
            is_valid, error = placement.validate(rc.layers)
            if not is_valid:
                raise UnigError(error)
        projection = ProjectionConfig(
            pv_weight=rc.pv_weight,
            pv_weight_mode=WeightMode(rc.pv_weight_mode),
            normalization=Normalization(rc.norm),
            hops=rc.hops,
        )
        return PipelineConfig(layers=rc.layers, hidden=rc.hidden,
                              projection=projection, placement=placement)

    @staticmethod
    def _hyperparams(rc: RunConfig) -> TrainHyperparams:
        return TrainHyperparams(lr=rc.lr, weight_decay=rc.weight_decay, dropout=rc.dropout,
                                epochs=rc.epochs, seed=rc.seed, float32=rc.float32)

    @staticmethod
    def _split_spec(rc: RunConfig, dataset: Dataset) -> SplitSpec:
        if rc.protocol:
            return SplitSpec.parse(rc.protocol, num_splits=rc.splits, seed=rc.seed)
        return SplitSpec.default_for(dataset.kind, num_splits=rc.splits, seed=rc.seed)

    @staticmethod
    def _load(cfg: CommandConfig) -> Dataset:
        return load_dataset(cfg.dataset, dedupe=cfg.dedupe, one_based=cfg.one_based)

    # ----- commands ----------------------------------------------------------------

    async def cmd_train(self, rc: RunConfig) -> dict:
        """Train once per split and write the aggregated report"""
        dataset = self._load(rc)
        spec = self._split_spec(rc, dataset)
        splits = make_splits(dataset, spec)

        report = Trainer(dataset).run(
            splits, self._pipeline_config(rc), self._hyperparams(rc),
            config_echo={'split': spec.to_dict()},
        )
        payload = report.to_dict()
        write_report(payload, rc.out)
        return payload

    async def cmd_sweep(self, sc: SweepConfig) -> dict:
        """Evaluate the grid, rerun the best trial on every split, write both results"""
        grid = SweepGrid.from_file(sc.grid)
        dataset = self._load(sc)
        spec = self._split_spec(sc, dataset)
        splits = make_splits(dataset, spec)

        trials = expand_grid(grid, max_trials=sc.max_trials, seed=sc.seed)
        if not trials:
            raise UnigError("The sweep grid has no valid configurations")

        runner = SweepRunner(
            Trainer(dataset), splits, self._hyperparams(sc),
            sweep_splits=sc.sweep_splits,
            max_workers=self.config.UNIG_THREADS,
        )
        results = await runner.run(trials)
        leaderboard = runner.leaderboard(results)
        best = leaderboard[0]
        if best.status != "ok":
            raise SweepDivergenceError(len(results))

        report = runner.rerun_best(best)
        payload = {
            'leaderboard': [entry.to_dict() for entry in leaderboard],
            'best': best.to_dict(),
            'report': report.to_dict(),
            'split': spec.to_dict(),
        }
        write_report(payload, sc.out)
        return payload

    async def cmd_homophily(self, hc: HomophilyConfig) -> dict:
        """Report clique-expansion homophily of a dataset"""
        dataset = self._load(hc)
        score = homophily_score(dataset.structure, dataset.labels)
        payload = {'dataset': dataset.name, 'kind': dataset.kind.value, **score.to_dict()}
        write_report(payload, hc.out)
        return payload

    async def cmd_synth(self, sc: SynthConfig) -> dict:
        """Grow a graph's edges into hyperedges and write the results with a sidecar"""
        dataset = self._load(sc)
        spec = SynthSpec(rank=sc.rank, probability=sc.p, seed=sc.seed)
        result = synth_extend(dataset, spec)
        save_dataset(result.dataset, sc.out)

        expanded = synth_graph(result.dataset)
        if sc.graph_out is not None:
            save_dataset(expanded, sc.graph_out)

        score = homophily_score(result.dataset.structure, result.dataset.labels)
        graph_score = homophily_score(expanded.structure, expanded.labels)
        sidecar = {
            'homophily': score.value,
            'graph_homophily': graph_score.value,
            'fallback_count': result.fallback_count,
            'duplicates_removed': result.duplicates_removed,
            'num_edges': result.dataset.structure.num_edges,
            'rank': spec.rank,
            'p': spec.probability,
            'seed': spec.seed,
        }
        sidecar_path = sc.sidecar or sc.out.with_suffix(".meta.json")
        write_report(sidecar, sidecar_path)
        write_report(sidecar)
        return sidecar

    # ----- dispatch ----------------------------------------------------------------

    async def dispatch(self, args: argparse.Namespace) -> int:
        """
        Resolve the command's settings and run it.

        Returns:
            0 on success, 2 when training diverged, 1 for any other failure
        """
        command = args.command
        handler = getattr(self, f"cmd_{command}")
        cfg: Optional[CommandConfig] = None
        try:
            cfg = load_command_config(command, args)
            payload = await handler(cfg)
        except DivergenceError as e:
            await self._record_error(command, cfg, e)
            print(f"error: {_one_line(e)}", file=sys.stderr)
            return EXIT_DIVERGED
        except (UnigError, ValidationError, ValueError, OSError) as e:
            await self._record_error(command, cfg, e)
            print(f"error: {_one_line(e)}", file=sys.stderr)
            return EXIT_ERROR

        await self._record_run(command, cfg, payload)
        return EXIT_OK

    async def _with_run_logger(self, action) -> None:
        database = self.database
        owned = False
        if database is None:
            if not self.config.RESULTS_DATABASE_URL:
                return
            database = Database(self.config.RESULTS_DATABASE_URL)
            owned = True
        try:
            async with database.run_logger() as run_logger:
                await action(run_logger)
        except Exception as e:
            logger.warning(f"Could not record run in results database: {e}")
        finally:
            if owned:
                await database.close()

    @staticmethod
    def _describe(cfg: Optional[CommandConfig]) -> tuple[Optional[str], Optional[int], dict[str, Any]]:
        """Dataset name, seed and settings echo stored with a run record"""
        if cfg is None:
            return None, None, {}
        return cfg.dataset.stem, getattr(cfg, "seed", None), cfg.model_dump(mode="json")

    async def _record_run(self, command: str, cfg: CommandConfig, payload: dict) -> None:
        dataset_name, seed, echo = self._describe(cfg)
        await self._with_run_logger(lambda run_logger: run_logger.log_run(
            command, dataset_name, seed, echo, payload,
        ))

    async def _record_error(self, command: str, cfg: Optional[CommandConfig],
                            error: Exception) -> None:
        dataset_name, seed, echo = self._describe(cfg)
        await self._with_run_logger(lambda run_logger: run_logger.log_error(
            command, dataset_name, seed, echo, type(error).__name__, _one_line(error),
        ))
