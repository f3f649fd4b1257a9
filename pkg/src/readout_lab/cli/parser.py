"""Argument parser for the readout-lab command line."""

import argparse
from typing import List

from readout_lab.metatrain import PRESETS
from readout_lab.models import EncoderVariant, ReadoutKind, TaskKind


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return number


def _task_list(value: str) -> List[str]:
    names = [part.strip() for part in value.split(",") if part.strip()]
    known = {kind.value for kind in TaskKind}
    unknown = [name for name in names if name not in known]
    if not names or unknown:
        raise argparse.ArgumentTypeError(f"expected a comma-separated subset of {sorted(known)}")
    return names


def _common() -> argparse.ArgumentParser:
    """Flags shared by every run-producing command."""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--out", default=None, help="Output directory (default: READOUT_LAB_OUT or ./runs)")
    parser.add_argument("--config", default=None, help="JSON file with configuration overrides")
    parser.add_argument("--seed", type=int, default=None, help="Base seed")
    parser.add_argument("--seeds", type=_positive_int, default=None, help="Number of seeds, starting at --seed")
    parser.add_argument("--jobs", type=_positive_int, default=None, help="Worker processes for seed fan-out")
    parser.add_argument("--log-level", default=None, help="Log level (default: READOUT_LAB_LOG_LEVEL)")
    return parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="readout-lab",
        description="Few-shot readout geometry: experiments, meta-training and hull audits",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    common = _common()

    experiment = commands.add_parser("experiment", parents=[common], help="Run a synthetic experiment")
    experiment.add_argument("name", choices=["translation", "bimodal", "calibration", "worked-examples"])
    experiment.add_argument("--lambda", dest="ridge_lambda", type=float, default=None, help="Ridge regularization")
    experiment.add_argument("--bins", dest="n_bins", type=_positive_int, default=None, help="Calibration bins")
    experiment.add_argument("--check", action="store_true", help="Exit 1 when acceptance thresholds fail")

    train = commands.add_parser(
        "train", parents=[common], help="Episodic meta-training through the ridge readout"
    )
    train.add_argument("--preset", choices=sorted(PRESETS), default="default")
    train.add_argument("--steps", type=int, default=None)
    train.add_argument("--episodes-per-step", type=int, choices=[1, 3], default=None)
    train.add_argument("--lambda", dest="ridge_lambda", type=float, default=None)
    train.add_argument("--lr", type=float, default=None)
    train.add_argument("--variant", choices=[v.value for v in EncoderVariant], default=None)
    train.add_argument("--source", choices=["sbm", "bimodal"], default=None)
    train.add_argument("--tasks", type=_task_list, default=None, help="e.g. node,edge,graph")
    train.add_argument(
        "--readout",
        action="append",
        choices=[kind.value for kind in ReadoutKind],
        default=None,
        help="Readout for the final frozen-encoder evaluation (repeatable)",
    )
    train.add_argument("--eval-episodes", type=int, default=20, help="0 skips the final evaluation")

    audit = commands.add_parser("audit", parents=[common], help="Convex-hull audit of class prototypes")
    audit.add_argument("embeddings", help="Header-free CSV or binary matrix file")
    audit.add_argument("labels", help="One class id per line")
    audit.add_argument("--hull-tol", dest="hull_tol", type=float, default=None, help="Relative interior margin")

    commands.add_parser("version", help="Print the package version")
    return parser
