"""Command-line front end"""
from readout_lab.cli.commands import (
    EXIT_FAILURE,
    EXIT_OK,
    EXIT_USAGE,
    cmd_audit,
    cmd_experiment,
    cmd_train,
    cmd_version,
)
from readout_lab.cli.parser import build_parser

__all__ = [
    "EXIT_FAILURE",
    "EXIT_OK",
    "EXIT_USAGE",
    "build_parser",
    "cmd_audit",
    "cmd_experiment",
    "cmd_train",
    "cmd_version",
]
