"""
Utilities module for su11sense.

This module provides utility functions for configuration loading,
logging setup, output directories and CSV export.
"""

import copy
import logging
import os
from typing import Any, Dict, Iterable, List, Optional, Tuple

import pandas as pd
import yaml

from .exceptions import InvalidParameterError

PACKAGE_VERSION = '0.1.0'

OUTPUT_DIR_ENV = 'SU11SENSE_OUTPUT_DIR'

CSV_FLOAT_FORMAT = '%.12g'


def _default_config_path() -> str:
    return os.path.join(os.path.dirname(os.path.abspath(__file__)), 'config', 'config.yaml')


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """
    Load configuration from YAML file.

    The packaged defaults are always read first; a user file is merged over
    them so it only needs the keys it changes.

    Args:
        config_path: Path to a user configuration file. If None, uses the defaults.

    Returns:
        Dictionary containing configuration.
    """
    with open(_default_config_path(), 'r') as f:
        config = yaml.safe_load(f) or {}

    if config_path is None:
        return config

    if not os.path.exists(config_path):
        raise InvalidParameterError(f"config file not found: {config_path}")

    with open(config_path, 'r') as f:
        user_config = yaml.safe_load(f) or {}
    if not isinstance(user_config, dict):
        raise InvalidParameterError(f"config file must hold a mapping: {config_path}")

    return _deep_merge(config, user_config)


def setup_logging(name: str, config: Optional[Dict[str, Any]] = None) -> logging.Logger:
    """
    Setup logging configuration.

    Args:
        name: Logger name.
        config: Configuration dictionary. If None, loads from config file.

    Returns:
        Configured logger instance.
    """
    if config is None:
        config = load_config()

    logger = logging.getLogger(name)

    # Avoid duplicate handlers
    if logger.handlers:
        return logger

    log_level = getattr(logging, str(config.get('logging', {}).get('level', 'INFO')).upper())
    logger.setLevel(log_level)

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    console_handler = logging.StreamHandler()
    console_handler.setLevel(log_level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    log_file = config.get('logging', {}).get('file')
    if log_file:
        try:
            log_dir = os.path.dirname(log_file)
            if log_dir:
                os.makedirs(log_dir, exist_ok=True)
            file_handler = logging.FileHandler(log_file)
            file_handler.setLevel(log_level)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)
        except OSError as e:
            logger.warning(f"Could not setup file logging: {str(e)}")

    logger.propagate = False
    return logger


def get_project_root() -> str:
    """
    Get the project root directory.

    Returns:
        Path to project root directory.
    """
    current_dir = os.path.dirname(os.path.abspath(__file__))
    return os.path.dirname(current_dir)


def resolve_output_dir(config: Dict[str, Any], override: Optional[str] = None) -> str:
    """
    Pick the output directory: explicit override, then environment, then config.

    Args:
        config: Configuration dictionary.
        override: Directory given on the command line, if any.

    Returns:
        Directory path (not yet created).
    """
    if override:
        return override
    env_dir = os.environ.get(OUTPUT_DIR_ENV)
    if env_dir:
        return env_dir
    return config.get('analysis', {}).get('output_dir', 'results')


def ensure_directory_exists(directory: str) -> str:
    """
    Ensure a directory exists, create if it doesn't.

    Args:
        directory: Directory path.

    Returns:
        The directory path.

    Raises:
        InvalidParameterError: If the directory cannot be created.
    """
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as e:
        raise InvalidParameterError(f"cannot create output directory {directory}: {e}") from e
    return directory


def format_metadata(metadata: Dict[str, Any]) -> List[str]:
    """Render metadata as '# key: value' lines in insertion order."""
    lines = []
    for key, value in metadata.items():
        if isinstance(value, float):
            value = CSV_FLOAT_FORMAT % value
        lines.append(f"# {key}: {value}")
    return lines


def write_csv(frame: pd.DataFrame, filepath: str,
              metadata: Optional[Dict[str, Any]] = None) -> str:
    """
    Write a data frame as CSV with '#'-prefixed provenance lines.

    Floats are written with 12 significant digits and missing values as
    empty cells, so identical inputs give identical files.

    Args:
        frame: Rows to write.
        filepath: Destination file.
        metadata: Parameters recorded above the header.

    Returns:
        The path written.

    Raises:
        InvalidParameterError: If the file cannot be written.
    """
    directory = os.path.dirname(filepath)
    if directory:
        ensure_directory_exists(directory)
    try:
        with open(filepath, 'w', newline='') as f:
            for line in format_metadata(metadata or {}):
                f.write(line + '\n')
            frame.to_csv(f, index=False, float_format=CSV_FLOAT_FORMAT, na_rep='')
    except OSError as e:
        raise InvalidParameterError(f"cannot write {filepath}: {e}") from e
    return filepath


def read_csv(filepath: str) -> Tuple[Dict[str, str], pd.DataFrame]:
    """
    Read a CSV written by write_csv.

    Returns:
        Tuple of (metadata, frame).
    """
    metadata = {}
    with open(filepath, 'r') as f:
        for line in f:
            if not line.startswith('#'):
                break
            key, _, value = line[1:].strip().partition(':')
            metadata[key.strip()] = value.strip()
    frame = pd.read_csv(filepath, comment='#')
    return metadata, frame


def float_grid(start: float, stop: float, step: float) -> Iterable[float]:
    """
    Inclusive arithmetic grid from start to stop.

    Uses an integer point count so the grid does not drift with step
    rounding.
    """
    if step <= 0:
        raise InvalidParameterError(f"step must be positive, got {step}")
    if stop < start:
        raise InvalidParameterError(f"empty range [{start}, {stop}]")
    count = int(round((stop - start) / step)) + 1
    return [start + i * step for i in range(count)]
