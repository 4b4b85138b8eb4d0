"""Logging configuration for the command line."""

import logging

from rich.console import Console
from rich.logging import RichHandler

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def configure_logging(level: str = "WARNING") -> None:
    """Route all package logging to a rich handler on stderr.

    Stdout carries the CSV/JSON documents only, so diagnostics never mix into them.
    """
    handler = RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=True)
    logging.basicConfig(level=level.upper(), format="%(message)s", datefmt="[%X]", handlers=[handler], force=True)
    logging.getLogger("app").setLevel(level.upper())
