"""Command handlers: each returns a process exit code."""

import argparse
import json
from functools import partial
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd
from pydantic import BaseModel

from readout_lab import __version__
from readout_lab.cli.config import (
    EXPERIMENT_CONFIGS,
    AuditConfig,
    BimodalConfig,
    CalibrationConfig,
    TranslationConfig,
    resolve,
    resolve_train_config,
)
from readout_lab.cli.io import encode_labels, read_embeddings, read_labels, write_manifest
from readout_lab.config import settings
from readout_lab.errors import ValidationError
from readout_lab.experiments import (
    CheckResult,
    bimodal_acceptance,
    calibration_acceptance,
    run_bimodal_sweep,
    run_calibration_suite,
    run_seeds,
    run_translation_sweep,
    run_worked_examples,
    seed_list,
    translation_acceptance,
    write_calibration,
    write_checks,
    write_frame,
    write_json,
    write_sweep,
)
from readout_lab.geometry import flag_interior
from readout_lab.metatrain import (
    TaskSource,
    TrainResult,
    build_sources,
    evaluate,
    final_accuracy,
    save_checkpoint,
    train,
    write_train_log,
)
from readout_lab.models import ReadoutKind, TaskKind, TrainConfig
from readout_lab.readouts import fit_prototypes, one_hot
from readout_lab.utils import get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
DEFAULT_READOUTS = (ReadoutKind.RIDGE, ReadoutKind.PROTOTYPE)

ExperimentOutcome = Tuple[List[Path], List[int], Optional[List[CheckResult]]]


def output_dir(args: argparse.Namespace) -> Path:
    return Path(args.out) if args.out is not None else Path(settings.out)


def _report_checks(checks: List[CheckResult]) -> int:
    failed = [check.name for check in checks if not check.passed]
    if failed:
        logger.error(f"Checks failed: count={len(failed)}, names={failed}")
        return EXIT_FAILURE
    logger.info(f"Checks passed: count={len(checks)}")
    return EXIT_OK


# ============================================================================
# experiment
# ============================================================================


def _translation(config: TranslationConfig, out: Path, check: bool) -> ExperimentOutcome:
    result = run_translation_sweep(
        n=config.n,
        d=config.d,
        margin=config.margin,
        t_grid=config.t_grid,
        seeds=config.seeds,
        seed=config.seed,
        jobs=config.jobs,
        ridge_lambda=config.ridge_lambda,
    )
    checks = translation_acceptance(result) if check else None
    return write_sweep(result, out, "translation"), result.seeds, checks


def _bimodal(config: BimodalConfig, out: Path, check: bool) -> ExperimentOutcome:
    result = run_bimodal_sweep(
        d=config.d,
        n_unimodal=config.n_unimodal,
        n_mode=config.n_mode,
        delta_grid=config.delta_grid,
        seeds=config.seeds,
        seed=config.seed,
        jobs=config.jobs,
        ridge_lambda=config.ridge_lambda,
    )
    checks = bimodal_acceptance(result) if check else None
    return write_sweep(result, out, "bimodal"), result.seeds, checks


def _calibration(config: CalibrationConfig, out: Path, check: bool) -> ExperimentOutcome:
    result = run_calibration_suite(
        n=config.n,
        C=config.C,
        d=config.d,
        seeds=config.seeds,
        seed=config.seed,
        jobs=config.jobs,
        geometries=config.geometries,
        n_bins=config.n_bins,
    )
    checks = calibration_acceptance(result) if check else None
    return write_calibration(result, out), result.seeds, checks


def _worked(config: BaseModel, out: Path, check: bool) -> ExperimentOutcome:
    checks = run_worked_examples()
    return [write_checks(checks, out)], [], checks


RUNNERS: Dict[str, Callable[[BaseModel, Path, bool], ExperimentOutcome]] = {
    "translation": _translation,
    "bimodal": _bimodal,
    "calibration": _calibration,
    "worked-examples": _worked,
}


def cmd_experiment(args: argparse.Namespace) -> int:
    """
    Run one synthetic experiment and write its CSV/JSON artifacts.

    With --check the aggregated results are held to their acceptance thresholds;
    worked examples are always checked. Any failed check exits with 1.
    """
    config = resolve(EXPERIMENT_CONFIGS[args.name], args)
    out = output_dir(args)
    logger.info(f"Experiment started: name={args.name}, out={out}")

    artifacts, seeds, checks = RUNNERS[args.name](config, out, args.check)
    code = EXIT_OK
    if checks is not None:
        if args.name != "worked-examples":
            artifacts.append(write_checks(checks, out, f"{args.name}_checks"))
        code = _report_checks(checks)

    manifest = write_manifest(
        f"experiment_{args.name}",
        {"name": args.name, "check": args.check, **config.model_dump(mode="json")},
        out,
        artifacts,
        seeds,
    )
    print(manifest)
    return code


# ============================================================================
# train
# ============================================================================


def _final_evaluation(
    result: TrainResult,
    sources: Dict[TaskKind, TaskSource],
    config: TrainConfig,
    readouts: Sequence[ReadoutKind],
    episodes: int,
) -> Dict[str, Dict[str, float]]:
    if episodes == 0:
        return {}
    evaluation = {}
    for readout in readouts:
        scores = evaluate(
            result.params,
            sources,
            readout,
            episodes=episodes,
            K=config.k_range[0],
            Q=config.q_range[0],
            seed=config.seed,
            ridge_lambda=config.ridge_lambda,
        )
        evaluation[readout.value] = {task.value: acc for task, acc in scores.items()}
        logger.info(f"Final evaluation: readout={readout.value}, accuracy={evaluation[readout.value]}")
    return evaluation


def train_seed(
    seed: int,
    config: TrainConfig,
    readouts: Sequence[ReadoutKind],
    eval_episodes: int,
) -> Tuple[TrainConfig, TrainResult, Dict[str, object]]:
    """One training run with config.seed replaced by seed; module level so workers can pickle it."""
    config = config.model_copy(update={"seed": seed})
    sources = build_sources(config)
    result = train(config, sources)
    summary = {
        "steps": config.steps,
        "episodes": len(result.log),
        "final_accuracy": final_accuracy(result.log) if result.log else None,
        "evaluation": _final_evaluation(result, sources, config, readouts, eval_episodes),
    }
    return config, result, summary


def cmd_train(args: argparse.Namespace) -> int:
    """
    Meta-train an encoder, then compare readouts on the frozen result.

    With --seeds N > 1 the runs for seeds seed..seed+N-1 fan out over --jobs
    processes and each writes into its own seed_<s> subdirectory.
    """
    config, fan_out = resolve_train_config(args)
    out = output_dir(args)
    readouts = [ReadoutKind(name) for name in (args.readout or DEFAULT_READOUTS)]
    seeds = seed_list(config.seed, fan_out.seeds)

    runs = run_seeds(
        partial(train_seed, config=config, readouts=readouts, eval_episodes=args.eval_episodes),
        seeds,
        fan_out.jobs,
    )
    artifacts = []
    for run_config, result, summary in runs:
        run_out = out if len(seeds) == 1 else out / f"seed_{run_config.seed}"
        config_json = run_config.model_dump(mode="json")
        artifacts += [
            save_checkpoint(result.params, run_out / "checkpoint.mchi", {"config": config_json, **summary}),
            write_train_log(result.log, run_out / "train_log.csv"),
            write_json(json.dumps(summary, indent=2, sort_keys=True), run_out / "train_summary.json"),
        ]
    manifest = write_manifest(
        "train",
        {
            "preset": args.preset,
            "readouts": [kind.value for kind in readouts],
            "eval_episodes": args.eval_episodes,
            "jobs": fan_out.jobs,
            **config.model_dump(mode="json"),
        },
        out,
        artifacts,
        seeds,
    )
    print(manifest)
    return EXIT_OK


# ============================================================================
# audit
# ============================================================================


def cmd_audit(args: argparse.Namespace) -> int:
    """Hull audit of class prototypes computed from user-supplied embeddings."""
    config = resolve(AuditConfig, args)
    Z = read_embeddings(args.embeddings)
    labels = read_labels(args.labels)
    if Z.shape[0] != labels.shape[0]:
        raise ValidationError(f"Row-count mismatch: embeddings={Z.shape[0]}, labels={labels.shape[0]}")
    classes, indices = encode_labels(labels)
    out = output_dir(args)

    prototypes = fit_prototypes(Z, one_hot(indices, classes.size)).prototypes
    report = flag_interior(prototypes, hull_tol=config.hull_tol)
    flagged = [int(classes[c]) for c in report.flagged]
    logger.info(f"Audit done: classes={classes.size}, flagged={flagged}, degenerate={report.degenerate_hull}")

    frame = pd.DataFrame(
        [
            {
                "class_index": entry.class_index,
                "label": int(classes[entry.class_index]),
                "pc1": report.pca_coordinates[entry.class_index][0],
                "pc2": report.pca_coordinates[entry.class_index][1],
                "d_ch": entry.d_ch,
                "d_ch_norm": entry.d_ch_norm,
                "on_outer_hull": entry.on_outer_hull,
                "interior_flag": entry.interior_flag,
            }
            for entry in report.classes
        ]
    )
    artifacts = [
        write_json(report.model_dump_json(indent=2), out / "hull_report.json"),
        write_frame(frame, out / "pca.csv"),
    ]
    manifest = write_manifest(
        "audit",
        {
            "embeddings": str(args.embeddings),
            "labels": str(args.labels),
            "classes": classes.tolist(),
            **config.model_dump(mode="json"),
        },
        out,
        artifacts,
        [config.seed],
    )
    print(manifest)
    return EXIT_OK


def cmd_version(args: argparse.Namespace) -> int:
    print(f"readout-lab {__version__}")
    return EXIT_OK
