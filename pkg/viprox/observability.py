# viprox/observability.py
from __future__ import annotations

import logging
from typing import Optional

from pythonjsonlogger.jsonlogger import JsonFormatter

from .config import settings

TEXT_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def setup_logging(level: Optional[str] = None, fmt: Optional[str] = None) -> None:
    """Configure the root logger from settings, overridable per call (the CLI passes --quiet)."""
    level_name = (level or settings.LOG_LEVEL or "INFO").upper()
    log_level = getattr(logging, level_name, logging.INFO)
    handler = logging.StreamHandler()
    if (fmt or settings.LOG_FORMAT) == "json":
        handler.setFormatter(JsonFormatter(TEXT_FORMAT))
    else:
        handler.setFormatter(logging.Formatter(TEXT_FORMAT))
    logging.basicConfig(level=log_level, handlers=[handler], force=True)
