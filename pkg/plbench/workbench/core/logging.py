from __future__ import annotations

import logging
import os
import sys


LOG_FORMAT = "%(asctime)s %(levelname)s [%(name)s] %(message)s"


def configure_logging(level: str | int | None = None) -> None:
    """Route workbench logs to stderr so report files stay byte-stable."""
    resolved = level if level is not None else os.environ.get("PLBENCH_LOG_LEVEL", "WARNING")
    if isinstance(resolved, str):
        resolved = resolved.upper()
    logging.basicConfig(level=resolved, format=LOG_FORMAT, stream=sys.stderr, force=True)
