"""
leafcast command line

USAGE:
  leafcast [--config FILE] [--seed N] [--jobs N] [--out DIR] <command>

COMMANDS:
  synth          Generate a synthetic site into the configured input paths
  ingest         Parse phenology, sites, weather and rasters into daily rows
  build-dataset  Encode, scale and window the rows; write the scaled table
  train          Train the configured LSTM and write model.ckpt
  tune           Hyperband search; write tune_report.csv and best_model.ckpt
  evaluate       Score a checkpoint and write every report
  predict        Label every example day with a checkpoint

EXIT CODES:
  0 success, 1 usage error, 2 data error, 3 numeric failure
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from . import __version__
from .adapters.json_adapter import load_config_file
from .application.pipeline import LeafcastPipeline
from .errors import LeafcastError, NumericError, UsageError

logger = logging.getLogger(__name__)

LOG_FILE = "leafcast.log"


class _Parser(argparse.ArgumentParser):
    """ArgumentParser reporting bad arguments as UsageError (exit 1)."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common_arguments(parser: argparse.ArgumentParser, default) -> None:
    parser.add_argument("--config", default=default, help="JSON config file (dotted or nested keys)")
    parser.add_argument("--seed", type=int, default=default, help="Seed for model, tuner and synthetic data")
    parser.add_argument("--jobs", type=int, default=default, help="Concurrent tuner trials")
    parser.add_argument("--out", default=default, help="Output directory")
    parser.add_argument("--epochs", type=int, default=default, help="Override model.epochs")
    parser.add_argument("--verbose", action="store_true", default=default, help="Debug logging")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="leafcast", description="Leaf-fall prediction from satellite indices and weather")
    parser.add_argument("--version", action="version", version=f"leafcast {__version__}")
    _common_arguments(parser, None)

    # Flags are accepted after the subcommand too; SUPPRESS keeps the
    # top-level value when the flag is not repeated there.
    common = argparse.ArgumentParser(add_help=False)
    _common_arguments(common, argparse.SUPPRESS)

    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    subparsers.add_parser("synth", parents=[common], help="Generate a synthetic dataset")
    subparsers.add_parser("ingest", parents=[common], help="Build daily series and the feature table")
    subparsers.add_parser("build-dataset", parents=[common], help="Scale, encode and window the feature table")
    subparsers.add_parser("train", parents=[common], help="Train the LSTM classifier")
    subparsers.add_parser("tune", parents=[common], help="Hyperband hyperparameter search")
    for name, text in (("evaluate", "Evaluate a checkpoint"), ("predict", "Predict leaf-fall days")):
        sub = subparsers.add_parser(name, parents=[common], help=text)
        sub.add_argument("--checkpoint", default=None, help="Checkpoint file (default <out>/model.ckpt)")
    return parser


def configure_logging(output_dir: Path, verbose: bool = False) -> None:
    output_dir.mkdir(parents=True, exist_ok=True)
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s [%(levelname)s] %(message)s",
        handlers=[logging.FileHandler(output_dir / LOG_FILE, encoding="utf-8"), logging.StreamHandler()],
        force=True
    )


COMMANDS: Dict[str, Callable[[LeafcastPipeline, argparse.Namespace], object]] = {
    "synth": lambda pipeline, args: pipeline.synth(),
    "ingest": lambda pipeline, args: pipeline.ingest(),
    "build-dataset": lambda pipeline, args: pipeline.build_dataset(),
    "train": lambda pipeline, args: pipeline.train(),
    "tune": lambda pipeline, args: pipeline.tune(),
    "evaluate": lambda pipeline, args: pipeline.evaluate(args.checkpoint),
    "predict": lambda pipeline, args: pipeline.predict(args.checkpoint),
}


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand; returns the process exit code."""
    try:
        args = build_parser().parse_args(argv)
        config = load_config_file(args.config).with_overrides(
            seed=args.seed, jobs=args.jobs, out=args.out, epochs=args.epochs
        )
    except UsageError as exc:
        print(f"[ERROR] {exc}", file=sys.stderr)
        return exc.exit_code

    configure_logging(Path(config.paths.output_dir), bool(args.verbose))
    logger.debug(f"leafcast {__version__} {args.command}, config hash {config.config_hash()}")

    try:
        COMMANDS[args.command](LeafcastPipeline(config), args)
    except LeafcastError as exc:
        logger.error(f"[ERROR] {exc}")
        return exc.exit_code
    except (FloatingPointError, OverflowError) as exc:
        logger.error(f"[ERROR] numeric failure: {exc}", exc_info=True)
        return NumericError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
