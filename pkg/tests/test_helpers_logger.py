# tests/test_helpers_logger.py
import logging
from datetime import datetime, timedelta
from pathlib import Path

import pytest

from core.errors import ConfigError
from utils.helpers import (
    DEFAULT_SETTINGS, PROJECT_ROOT, THREADS_ENV, ensure_directories, get_thread_count,
    load_settings, merge_configs, run_configs_dir,
)
from utils.logger import cleanup_old_logs, setup_logger


def test_bundled_settings_load():
    settings = load_settings()
    assert settings['sweep']['default_steps'] == 401
    assert settings['verify']['converge_tol'] == 1e-12


def test_missing_settings_file_falls_back(tmp_path):
    settings = load_settings(tmp_path / "absent.yaml")
    assert settings == DEFAULT_SETTINGS
    assert settings is not DEFAULT_SETTINGS


def test_broken_settings_file_falls_back(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("sweep: [threads\n", encoding="utf-8")
    assert load_settings(path) == DEFAULT_SETTINGS


def test_partial_settings_are_merged(tmp_path):
    path = tmp_path / "partial.yaml"
    path.write_text("sweep:\n  threads: 3\n", encoding="utf-8")
    settings = load_settings(path)
    assert settings['sweep'] == {'threads': 3, 'default_steps': 401}
    assert settings['paths'] == DEFAULT_SETTINGS['paths']


def test_merge_configs_is_deep():
    merged = merge_configs({'a': {'b': 1, 'c': 2}, 'd': 3}, {'a': {'c': 5}, 'e': 6})
    assert merged == {'a': {'b': 1, 'c': 5}, 'd': 3, 'e': 6}


def test_thread_count_precedence(monkeypatch):
    settings = {'sweep': {'threads': 3}}
    assert get_thread_count(None, {'sweep': {}}) == 1
    assert get_thread_count(None, settings) == 3
    monkeypatch.setenv(THREADS_ENV, "5")
    assert get_thread_count(None, settings) == 5
    assert get_thread_count(2, settings) == 2


@pytest.mark.parametrize("value", [0, -2, "four"])
def test_thread_count_rejects_bad_flag(value):
    with pytest.raises(ConfigError) as info:
        get_thread_count(value, {'sweep': {'threads': 1}})
    assert info.value.key == 'threads'


def test_thread_count_rejects_bad_environment(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "many")
    with pytest.raises(ConfigError):
        get_thread_count(None, {'sweep': {'threads': 1}})


def test_run_configs_dir_is_anchored_to_project():
    assert run_configs_dir({'paths': {'run_configs': 'config/runs'}}) == PROJECT_ROOT / 'config' / 'runs'
    assert run_configs_dir().is_dir()


def test_ensure_directories(tmp_path):
    settings = {'paths': {'logs': str(tmp_path / 'l'), 'output': str(tmp_path / 'o')}}
    ensure_directories(settings)
    assert (tmp_path / 'l').is_dir()
    assert (tmp_path / 'o').is_dir()


def test_setup_logger_handlers(tmp_path):
    logger = setup_logger("lzs-test", run_type="unit", level="warning")
    assert logger.level == logging.WARNING
    assert not logger.propagate
    kinds = {type(h) for h in logger.handlers}
    assert kinds == {logging.StreamHandler, logging.FileHandler}
    log_file = Path('logs') / 'unit' / f"{datetime.now().strftime('%Y-%m-%d')}.log"
    assert log_file.exists()

    # a second call replaces rather than stacks handlers
    again = setup_logger("lzs-test", run_type="unit")
    assert again is logger
    assert len(again.handlers) == 2
    for handler in again.handlers:
        handler.close()


def test_cleanup_old_logs(tmp_path):
    old = tmp_path / f"{(datetime.now() - timedelta(days=30)).strftime('%Y-%m-%d')}.log"
    fresh = tmp_path / f"{datetime.now().strftime('%Y-%m-%d')}.log"
    stray = tmp_path / "notes.log"
    old.write_text("old", encoding="utf-8")
    fresh.write_text("new", encoding="utf-8")
    stray.write_text("keep", encoding="utf-8")
    cleanup_old_logs(tmp_path, retention_days=15)
    assert not old.exists()
    assert fresh.exists()
    assert stray.exists()
