# utils/logger.py
"""
Logging configuration with auto-cleanup and UTF-8 support
"""

import logging
import sys
from datetime import datetime, timedelta
from pathlib import Path
from typing import Optional

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def setup_logger(name: str, run_type: str = "simulation",
                 level: Optional[str] = None) -> logging.Logger:
    """
    Setup logger with file and console handlers

    Args:
        name: Logger name
        run_type: Sub-directory of the log root ('simulation', 'verify', ...)
        level: Logging level; defaults to logging.level from settings
    """
    from utils.helpers import load_settings

    settings = load_settings()
    log_settings = settings['logging']
    level = (level or log_settings.get('level', 'INFO')).upper()

    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, level, logging.INFO))
    logger.propagate = False

    # Remove existing handlers
    for handler in list(logger.handlers):
        handler.close()
    logger.handlers.clear()

    formatter = logging.Formatter(log_settings.get('format', LOG_FORMAT), datefmt=DATE_FORMAT)

    # Console handler on stderr; stdout carries command results
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logging.INFO)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    # Dated file handler with UTF-8 encoding
    log_dir = Path(settings['paths']['logs']) / run_type
    try:
        log_dir.mkdir(parents=True, exist_ok=True)
        log_file = log_dir / f"{datetime.now().strftime('%Y-%m-%d')}.log"
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)
    except OSError as e:
        logger.warning(f"File logging disabled ({log_dir}): {e}")
        return logger

    # Cleanup old logs
    cleanup_old_logs(log_dir, retention_days=int(log_settings.get('retention_days', 15)))

    return logger


def cleanup_old_logs(log_dir: Path, retention_days: int = 15):
    """
    Remove log files older than retention_days

    Args:
        log_dir: Directory containing log files
        retention_days: Number of days to keep logs
    """
    try:
        cutoff_date = datetime.now() - timedelta(days=retention_days)

        for log_file in log_dir.glob("*.log"):
            try:
                file_date = datetime.strptime(log_file.stem, '%Y-%m-%d')
            except ValueError:
                continue
            if file_date < cutoff_date:
                log_file.unlink()

    except Exception:
        # Don't fail if cleanup fails
        pass
