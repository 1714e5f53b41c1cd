"""CLI package initialization."""
from .runner import build_parser, run

__all__ = ['build_parser', 'run']
