"""
Configuration Module for the Fuzzy ID3 Toolkit

This module manages all configuration settings for runs including:
- Toolkit configuration (toolkit_config.yaml)
- Environment variables (.env, FUZZID3_DATA)
- Experiment parameters (k, fold size, prototype scope, certainty mapping)
- Output settings
"""

import copy
import os
from pathlib import Path
from typing import Dict, Any, Optional

import yaml
from dotenv import load_dotenv

# Default configuration file path
CONFIG_PATH = Path(__file__).parent / "toolkit_config.yaml"
ENV_PATH = Path(__file__).parent.parent / ".env"
DATA_ENV_VAR = "FUZZID3_DATA"

# Default configuration
DEFAULT_CONFIG = {
    "data_path": "",
    "method": "both",
    "class_pair": "1,2",
    "k": 2,
    "fold_size": 10,
    "format": "table",
    "verbose": False,
    "prototype_scope": "per-node",
    "certainty": "exp",
    "degenerate_epsilon": 1e-6,
    "workers": 1,
}


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path: Optional[Path] = None) -> Dict[str, Any]:
    """
    Load toolkit configuration from YAML file.

    Keys missing from the file fall back to DEFAULT_CONFIG.

    Args:
        config_path: Optional path to config file, defaults to toolkit_config.yaml

    Returns:
        Dictionary containing configuration settings
    """
    if config_path is None:
        config_path = CONFIG_PATH

    config_path = Path(config_path)
    if not config_path.exists():
        raise FileNotFoundError(f"Configuration file not found: {config_path}")

    with open(config_path, 'r', encoding='utf-8') as f:
        loaded = yaml.safe_load(f) or {}

    if not isinstance(loaded, dict):
        raise ValueError(f"Configuration file must hold a mapping: {config_path}")

    return _merge(DEFAULT_CONFIG, loaded)


def save_config(config: Dict[str, Any], config_path: Optional[Path] = None) -> None:
    """
    Save toolkit configuration to YAML file.

    Args:
        config: Configuration dictionary to save
        config_path: Optional path to save config file, defaults to toolkit_config.yaml
    """
    if config_path is None:
        config_path = CONFIG_PATH

    config_path = Path(config_path)
    # Ensure config directory exists
    config_path.parent.mkdir(parents=True, exist_ok=True)

    with open(config_path, 'w', encoding='utf-8') as f:
        yaml.dump(config, f, default_flow_style=False, sort_keys=False)


def load_environment(env_path: Optional[Path] = None) -> Optional[str]:
    """
    Load the project .env file (if any) and return the data path it or the
    shell environment supplies through FUZZID3_DATA.
    """
    env_path = Path(env_path) if env_path is not None else ENV_PATH
    if env_path.exists():
        load_dotenv(env_path, override=False)
    return os.getenv(DATA_ENV_VAR) or None


__all__ = [
    "load_config",
    "save_config",
    "load_environment",
    "DEFAULT_CONFIG",
    "CONFIG_PATH",
    "DATA_ENV_VAR",
]
