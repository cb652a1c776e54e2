import logging

from rich.console import Console
from rich.logging import RichHandler

from app.config import settings

_ROOT = settings.app_name


def _configure() -> logging.Logger:
    root = logging.getLogger(_ROOT)
    if not root.handlers:
        handler = RichHandler(
            console=Console(stderr=True),
            show_path=False,
            rich_tracebacks=True,
        )
        handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
        root.addHandler(handler)
        root.propagate = False
    root.setLevel(settings.log_level.upper())
    return root


_configure()


def get_logger(name: str) -> logging.Logger:
    """Get a child of the package logger"""
    return logging.getLogger(f"{_ROOT}.{name}")


def set_level(level: str) -> None:
    logging.getLogger(_ROOT).setLevel(level.upper())
