"""Utility modules"""
from readout_lab.utils.logger import get_logger, setup_logging, logger

__all__ = ["get_logger", "setup_logging", "logger"]
