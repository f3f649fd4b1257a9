import sys
from typing import Optional, Sequence

from pydantic import ValidationError as ConfigValidationError

from readout_lab.cli import (
    EXIT_FAILURE,
    EXIT_USAGE,
    build_parser,
    cmd_audit,
    cmd_experiment,
    cmd_train,
    cmd_version,
)
from readout_lab.errors import (
    InsufficientClassesError,
    ParameterError,
    ReadoutLabError,
    TrainingAborted,
    ValidationError,
)
from readout_lab.utils import get_logger, setup_logging

logger = get_logger(__name__)

HANDLERS = {
    "experiment": cmd_experiment,
    "train": cmd_train,
    "audit": cmd_audit,
    "version": cmd_version,
}

# Errors caused by the caller's input rather than by the computation
USAGE_ERRORS = (ParameterError, ValidationError, InsufficientClassesError, ConfigValidationError)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point of the readout-lab console script.

    Returns 0 on success, 1 on a computational failure or failed check and
    2 on a usage or input error.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    setup_logging(getattr(args, "log_level", None))

    try:
        return HANDLERS[args.command](args)
    except USAGE_ERRORS as e:
        logger.error(f"Invalid input: command={args.command}, error={e}")
        return EXIT_USAGE
    except TrainingAborted as e:
        logger.error(f"Training aborted: step={e.step}, loss={e.loss}")
        return EXIT_FAILURE
    except ReadoutLabError as e:
        logger.error(f"Command failed: command={args.command}, error={type(e).__name__}: {e}")
        return EXIT_FAILURE
    except Exception as e:
        logger.exception(f"Unexpected error: command={args.command}, error={e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
