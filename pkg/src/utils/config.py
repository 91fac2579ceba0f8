"""
Configuration loading and logging setup shared by the CLI and the self-test.
"""
import copy
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from ..errors import InstanceFileError

DEFAULT_CONFIG_PATH = "config.yaml"

DEFAULT_CONFIG: Dict[str, Any] = {
    'logging': {
        'level': 'WARNING',
    },
    'kernel': {
        'max_sample_height': 3,
    },
    'algebra': {
        'closure_cap': 4096,
    },
    'groupoid': {
        'unit_search_attempts': 64,
        'enumeration_limit': 4096,
    },
    'quantization': {
        'site_cap': 6,
    },
    'symbolic': {
        'depth': 8,
        'max_states': 20000,
    },
    'selftest': {
        'seed': 7,
        # instance counts per suite; the defaults are the acceptance minima
        'sizes': {
            'hcompose_fp': 500,
            'hcompose_gauss': 100,
            'associativity': 500,
            'pi0': 200,
            'transport': 300,
            'interval_composition': 200,
            'mapping_classes': 200,
            'lorentz': 100,
            'two_functor': 50,
            'kms': 500,
            'instantiations': 100,
        },
    },
    'output': {
        'report_path': 'selftest_report.json',
    },
}


def setup_logging(level: str = "WARNING") -> None:
    """Configure the root logger once, on stderr so JSON on stdout stays clean."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
        force=True,
    )


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _merge(base[key], value)
        else:
            base[key] = value
    return base


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """DEFAULT_CONFIG with the YAML file at ``config_path`` merged over it.

    Without an explicit path, ``config.yaml`` in the working directory is used
    when present.
    """
    config = copy.deepcopy(DEFAULT_CONFIG)
    path = Path(config_path) if config_path else Path(DEFAULT_CONFIG_PATH)
    if not path.exists():
        if config_path:
            raise InstanceFileError(f"config file {path} does not exist", {"file": str(path)})
        return config

    try:
        with open(path, 'r', encoding='utf-8') as f:
            user_config = yaml.safe_load(f) or {}
    except yaml.YAMLError as exc:
        mark = getattr(exc, 'problem_mark', None)
        line = mark.line + 1 if mark is not None else None
        raise InstanceFileError(f"{path}: invalid YAML: {exc}", {"file": str(path), "line": line}) from exc
    if not isinstance(user_config, dict):
        raise InstanceFileError(f"{path}: top level must be a mapping", {"file": str(path), "line": 1})
    return _merge(config, user_config)


def section(config: Dict[str, Any], name: str) -> Dict[str, Any]:
    return config.get(name) or {}
