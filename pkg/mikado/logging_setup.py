import logging
import os
from typing import Optional

from rich.logging import RichHandler


def setup_logging(level: Optional[str] = None, quiet: bool = False) -> None:
    """Install a RichHandler on the root logger; call once from the CLI."""
    level = (level or os.getenv("MIKADO_LOG_LEVEL", "INFO")).upper()
    if quiet:
        level = "WARNING"

    root = logging.getLogger()
    root.handlers.clear()
    root.setLevel(level)

    handler = RichHandler(
        rich_tracebacks=True,
        show_time=True,
        show_level=True,
        show_path=False,
    )
    handler.setLevel(level)

    # RichHandler renders time/level itself
    handler.setFormatter(logging.Formatter("%(message)s"))

    root.addHandler(handler)
