#!/usr/bin/env python3
"""
UniG-Encoder toolkit - Main Entry Point
Node classification on graphs and hypergraphs with projection-based encoders
"""

import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from src.config import Config
from src.handlers import CommandHandler
from src.models import Normalization, WeightMode


def _add_source_flags(parser: argparse.ArgumentParser) -> None:
    # None defaults let --config values through unless a flag is given explicitly
    parser.add_argument("--config", type=Path, default=None,
                        help="JSON file with any of this command's settings")
    parser.add_argument("--dataset", type=Path, default=None, help="Dataset JSON file")
    parser.add_argument("--dedupe", action="store_const", const=True, default=None,
                        help="Drop repeated edges instead of rejecting the file")
    parser.add_argument("--one-based", dest="one_based", action="store_const", const=True,
                        default=None, help="Edge member indices in the file start at 1")


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    _add_source_flags(parser)
    parser.add_argument("--protocol", default=None,
                        help="Split protocol, e.g. per-class:0.48,0.32,0.2 or uniform:0.5,0.25,0.25")
    parser.add_argument("--splits", type=int, default=None, help="Number of splits")
    parser.add_argument("--seed", type=int, default=None, help="Master seed")
    parser.add_argument("--layers", type=int, default=None, help="Number of linear layers")
    parser.add_argument("--hidden", type=int, default=None, help="Hidden layer width")
    parser.add_argument("--lr", type=float, default=None, help="Adam learning rate")
    parser.add_argument("--weight-decay", dest="weight_decay", type=float, default=None)
    parser.add_argument("--dropout", type=float, default=None)
    parser.add_argument("--epochs", type=int, default=None)
    parser.add_argument("--pv-weight", dest="pv_weight", type=float, default=None,
                        help="Node-block weight c")
    parser.add_argument("--pv-weight-mode", dest="pv_weight_mode",
                        choices=[m.value for m in WeightMode], default=None)
    parser.add_argument("--norm", choices=[n.value for n in Normalization], default=None)
    parser.add_argument("--placement", default=None, help="'none', 'auto' or 'f,r'")
    parser.add_argument("--hops", type=int, default=None,
                        help="Compound applications for a same-stage placement")
    parser.add_argument("--float32", action="store_const", const=True, default=None)
    parser.add_argument("--out", type=Path, default=None, help="Report path (stdout when omitted)")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the train, sweep, homophily and synth subcommands"""
    parser = argparse.ArgumentParser(prog="unig", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    train = commands.add_parser("train", help="Train on every split and report accuracy")
    _add_run_flags(train)

    sweep = commands.add_parser("sweep", help="Grid search, then rerun the best trial")
    _add_run_flags(sweep)
    sweep.add_argument("--grid", type=Path, default=None, help="JSON file with grid axes")
    sweep.add_argument("--max-trials", dest="max_trials", type=int, default=None,
                       help="Evaluate a seeded random subset of at most this many points")
    sweep.add_argument("--sweep-splits", dest="sweep_splits", type=int, default=None,
                       help="Splits each trial is evaluated on (default 2)")

    homophily = commands.add_parser("homophily", help="Clique-expansion homophily score")
    _add_source_flags(homophily)
    homophily.add_argument("--out", type=Path, default=None)

    # rank, p and out are required, from the flags or the --config file
    synth = commands.add_parser("synth", help="Grow graph edges into hyperedges")
    _add_source_flags(synth)
    synth.add_argument("--rank", type=int, default=None, help="Target hyperedge size")
    synth.add_argument("--p", type=float, default=None,
                       help="Probability of drawing a same-label node")
    synth.add_argument("--seed", type=int, default=None, help="Growth seed (default 0)")
    synth.add_argument("--out", type=Path, default=None, help="Synthetic hypergraph path")
    synth.add_argument("--graph-out", dest="graph_out", type=Path, default=None,
                       help="Also write the clique-expanded graph")
    synth.add_argument("--sidecar", type=Path, default=None,
                       help="Sidecar path (default <out>.meta.json)")
    return parser


def setup_logging(config: Config) -> None:
    """Log to stderr, and to LOG_FILE when set; stdout is reserved for JSON"""
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if config.LOG_FILE:
        handlers.append(logging.FileHandler(config.LOG_FILE))
    logging.basicConfig(
        level=getattr(logging, config.LOG_LEVEL, logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


async def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main application entry point; returns the process exit code"""
    args = build_parser().parse_args(argv)
    try:
        config = Config()
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1

    setup_logging(config)
    logger = logging.getLogger(__name__)
    logger.debug(f"Running {args.command}")

    return await CommandHandler(config).dispatch(args)


if __name__ == "__main__":
    sys.exit(asyncio.run(main()))
