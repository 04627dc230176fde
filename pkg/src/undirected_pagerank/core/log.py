"""Logging setup: module loggers rendered on stderr through rich."""

import logging
from typing import Union

from rich.console import Console
from rich.logging import RichHandler


def configure_logging(level: Union[str, int] = "WARNING") -> None:
    """Route all library logging to the diagnostic stream.

    Args:
        level: Logging level name or number
    """
    handler = RichHandler(
        console=Console(stderr=True),
        show_time=False,
        show_path=False,
        markup=False,
    )
    logging.basicConfig(
        level=level.upper() if isinstance(level, str) else level,
        format="%(message)s",
        handlers=[handler],
        force=True,
    )
