# utils/helpers.py
"""
Common utility functions: application settings, worker count, directories
"""

import copy
import os
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from core.errors import ConfigError

PROJECT_ROOT = Path(__file__).resolve().parent.parent
SETTINGS_FILE = PROJECT_ROOT / 'config' / 'settings.yaml'
THREADS_ENV = 'LZS_THREADS'

DEFAULT_SETTINGS: Dict[str, Any] = {
    'logging': {
        'retention_days': 15,
        'level': 'DEBUG',
        'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    },
    'paths': {
        'logs': 'logs',
        'output': 'output',
        'run_configs': str(PROJECT_ROOT / 'config' / 'runs')
    },
    'sweep': {
        'threads': 1,
        'default_steps': 401
    },
    'verify': {
        'seed': 20100601,
        'dynamics_sets': 200,
        'closed_form_sets': 1000,
        'tail_sets': 100,
        'converge_tol': 1e-12
    }
}


def load_settings(settings_file: Optional[Path] = None) -> Dict[str, Any]:
    """
    Load settings: built-in defaults deep-merged with config/settings.yaml

    A missing or broken file falls back to the defaults with a warning.
    """
    default_config = copy.deepcopy(DEFAULT_SETTINGS)
    settings_file = Path(settings_file) if settings_file else SETTINGS_FILE

    try:
        if not settings_file.exists():
            print(f"⚠️ {settings_file} not found, using defaults", file=sys.stderr)
            return default_config

        with open(settings_file, 'r', encoding='utf-8') as f:
            loaded_config = yaml.safe_load(f)

        if not loaded_config:
            return default_config

        return merge_configs(default_config, loaded_config)

    except (OSError, yaml.YAMLError) as e:
        print(f"❌ Error loading {settings_file}: {e}", file=sys.stderr)
        return default_config


def merge_configs(default: Dict, loaded: Dict) -> Dict:
    """Deep merge configurations"""
    result = default.copy()

    for key, value in loaded.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = merge_configs(result[key], value)
        else:
            result[key] = value

    return result


def _positive_int(value: Any, source: str) -> int:
    try:
        number = int(str(value).strip())
    except ValueError:
        raise ConfigError(f"Thread count from {source} is not an integer: {value!r}", key='threads') from None
    if number < 1:
        raise ConfigError(f"Thread count from {source} must be >= 1, got {number}", key='threads')
    return number


def get_thread_count(cli_value: Optional[Any] = None,
                     settings: Optional[Dict[str, Any]] = None) -> int:
    """
    Resolve the sweep worker count

    Order: --threads flag, LZS_THREADS (also read from a .env file),
    sweep.threads setting, 1.

    Raises:
        ConfigError: non-integer or non-positive value
    """
    if cli_value is not None:
        return _positive_int(cli_value, '--threads')

    load_dotenv()
    env_value = os.getenv(THREADS_ENV)
    if env_value:
        return _positive_int(env_value, THREADS_ENV)

    settings = settings if settings is not None else load_settings()
    configured = settings.get('sweep', {}).get('threads')
    if configured is not None:
        return _positive_int(configured, 'settings.yaml')

    return 1


def run_configs_dir(settings: Optional[Dict[str, Any]] = None) -> Path:
    """Directory holding the bundled run configurations"""
    settings = settings if settings is not None else load_settings()
    path = Path(settings['paths']['run_configs'])
    return path if path.is_absolute() else PROJECT_ROOT / path


def ensure_directories(settings: Optional[Dict[str, Any]] = None):
    """Create the log and output directories"""
    settings = settings if settings is not None else load_settings()
    directories = [
        settings['paths']['logs'],
        settings['paths']['output']
    ]

    for directory in directories:
        Path(directory).mkdir(parents=True, exist_ok=True)
