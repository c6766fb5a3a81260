# src/besselpairs/utils/logger.py

import logging
import os
import sys
import uuid
from logging.handlers import RotatingFileHandler
from typing import Optional

import structlog

from besselpairs.config.settings import settings


def _ensure_dir(path: str) -> None:
    """Ensure the directory for a given file path exists."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)


def _build_rotating_file_handler(path: str) -> RotatingFileHandler:
    """Create a rotating file handler."""
    _ensure_dir(path)
    handler = RotatingFileHandler(
        filename=path,
        maxBytes=10 * 1024 * 1024,  # 10 MB rotation
        backupCount=5,
        encoding="utf-8",
    )
    handler.setFormatter(logging.Formatter("%(message)s"))
    return handler


def _get_global_handlers() -> list[logging.Handler]:
    """Build global log handlers based on settings."""
    handlers: list[logging.Handler] = []

    # stdout carries command output, so the console sink is stderr
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(logging.Formatter("%(message)s"))
    handlers.append(console_handler)

    if settings.log_file_enabled:
        handlers.append(_build_rotating_file_handler(settings.log_file_path))

    return handlers


def _resolve_level(level: Optional[str]) -> int:
    name = (level or settings.log_level).upper()
    return getattr(logging, name, logging.WARNING)


def configure_logging(level: Optional[str] = None) -> None:
    """Configure structured logging for the library and the CLI."""
    resolved = _resolve_level(level)
    logging.basicConfig(
        level=resolved,
        handlers=_get_global_handlers(),
        force=True,
    )

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.StackInfoRenderer(),
            structlog.dev.set_exc_info,
            structlog.processors.JSONRenderer(),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(resolved),
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=False,
    )


def _install_quiet_default() -> None:
    """WARNING and above as JSON on stderr until configure_logging runs."""
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.JSONRenderer(),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(logging.WARNING),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(sys.stderr),
        cache_logger_on_first_use=False,
    )


def get_logger(name: Optional[str] = None) -> structlog.BoundLogger:
    """Get a configured logger instance (global)."""
    if not structlog.is_configured():
        _install_quiet_default()
    return structlog.get_logger(name)


def get_run_logger(verb: str, run_id: Optional[str] = None) -> structlog.BoundLogger:
    """Logger bound to a single CLI invocation."""
    if run_id is None:
        run_id = str(uuid.uuid4())
    return get_logger("besselpairs.run").bind(verb=verb, run_id=run_id)
