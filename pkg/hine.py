"""
Command-line entry point.

Usage:
    python hine.py <command> [options]
    python hine.py --help
"""
import sys

from cli import run


if __name__ == "__main__":
    sys.exit(run())
