"""
Progress tracking utilities for sampling, training and evaluation.
Provides throughput measurement and structured, pipe-delimited log lines.
"""
import time
from dataclasses import dataclass, field
from typing import Optional

from utils.logger import log


@dataclass
class ThroughputMeter:
    """Wall-clock timer that reports items per second."""
    started: float = field(default_factory=time.perf_counter)
    items: int = 0

    def add(self, count: int) -> None:
        """Count processed items."""
        self.items += count

    @property
    def elapsed(self) -> float:
        """Seconds since the meter started."""
        return time.perf_counter() - self.started

    @property
    def rate(self) -> float:
        """Items per second (0 before any time has passed)."""
        elapsed = self.elapsed
        return self.items / elapsed if elapsed > 0 else 0.0


class TrainingProgressLogger:
    """Structured logger for sampling and training progress."""

    @staticmethod
    def log_phase_start(phase: int, name: str, samples: int, signatures: int, epochs: int):
        """Log the start of a training phase."""
        log.info(f"[TRAIN] PHASE {phase} START | {name} | samples={samples} | signatures={signatures} | max_epochs={epochs}")

    @staticmethod
    def log_epoch(phase: int, epoch: int, loss: float, wall_time: float, rate: float):
        """Log one finished epoch."""
        log.info(f"[TRAIN] EPOCH | phase={phase} | epoch={epoch} | loss={loss:.6f} | time={format_time(wall_time)} | samples/s={rate:.0f}")

    @staticmethod
    def log_phase_end(phase: int, epochs: int, reason: str):
        """Log why a phase stopped."""
        log.info(f"[TRAIN] PHASE {phase} END | epochs={epochs} | reason={reason}")

    @staticmethod
    def log_checkpoint(phase: int, epoch: int, path: str):
        """Log a written checkpoint."""
        log.info(f"[TRAIN] CHECKPOINT | phase={phase} | epoch={epoch} | path={path}")

    @staticmethod
    def log_abort(phase: int, epoch: int, error: str, checkpoint: Optional[str]):
        """Log a numerical abort."""
        log.error(f"[TRAIN] ABORT | phase={phase} | epoch={epoch} | {error} | last_checkpoint={checkpoint or 'none'}")

    @staticmethod
    def log_samples(kind: str, count: int, elapsed: float):
        """Log a finished sampling run."""
        log.info(f"[SAMPLE] {kind.upper()} | samples={format_count(count)} | time={format_time(elapsed)}")

    @staticmethod
    def log_metric(task: str, name: str, value: float):
        """Log an evaluation metric."""
        log.info(f"[EVAL] {task.upper()} | {name}={value:.4f}")


def format_time(seconds: float) -> str:
    """
    Format seconds to human readable time.

    Args:
        seconds: Time in seconds

    Returns:
        Formatted time string (HH:MM:SS, MM:SS, or seconds with decimals under a minute)
    """
    if seconds < 0:
        return "00:00"

    if seconds < 60:
        return f"{seconds:.2f}s"

    seconds = int(seconds)
    if seconds < 3600:
        minutes = seconds // 60
        secs = seconds % 60
        return f"{minutes:02d}:{secs:02d}"
    else:
        hours = seconds // 3600
        minutes = (seconds % 3600) // 60
        secs = seconds % 60
        return f"{hours:02d}:{minutes:02d}:{secs:02d}"


def format_count(count: int) -> str:
    """
    Format a count with K/M suffixes.

    Args:
        count: Number of items

    Returns:
        Compact count string
    """
    value = float(count)
    for unit in ['', 'K', 'M', 'G']:
        if abs(value) < 1000.0:
            return f"{value:.0f}{unit}" if unit == '' else f"{value:.1f}{unit}"
        value /= 1000.0
    return f"{value:.1f}T"


# Global instance
progress_logger = TrainingProgressLogger()
