"""Figures from entroledger CSV output."""

__version__ = "0.1.0"

from . import render, spec  # noqa: F401
from .spec import FigureSpec, load_spec  # noqa: F401
