"""
File management utilities.
Resolves input paths against the data directory and lays out checkpoint directories.
"""
import re
from pathlib import Path
from typing import List, Optional, Tuple

from config.constants import CHECKPOINT_META
from config.settings import settings
from utils.logger import log

_EPOCH_DIR = re.compile(r'^epoch_(\d+)$')
_PHASE_DIR = re.compile(r'^phase(\d+)$')


class FileManager:
    """Path helpers for inputs, outputs and checkpoints."""

    def __init__(self, data_dir: Path | str | None = None):
        """
        Initialize file manager.

        Args:
            data_dir: Directory used for relative inputs not found in the working directory
        """
        self.data_dir = Path(data_dir) if data_dir is not None else settings.data_path

    def resolve_input(self, path: Path | str) -> Path:
        """
        Resolve an input path, falling back to the data directory.

        Args:
            path: Path as given on the command line

        Returns:
            Existing path if found, otherwise the path as given
        """
        path = Path(path).expanduser()
        if path.exists() or path.is_absolute():
            return path
        candidate = self.data_dir / path
        if candidate.exists():
            log.debug(f"Resolved {path} against data dir: {candidate}")
            return candidate
        return path

    @staticmethod
    def ensure_parent(path: Path | str) -> Path:
        """Create the parent directory of an output path."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    @staticmethod
    def checkpoint_dir(root: Path | str, phase: int, epoch: int) -> Path:
        """
        Directory for one checkpoint: root/phase{P}/epoch_{N}.

        Args:
            root: Checkpoint root directory
            phase: Training phase (1 = GHINE, 2 = chains)
            epoch: Number of epochs completed in that phase

        Returns:
            Checkpoint directory path (not created)
        """
        return Path(root) / f"phase{phase}" / f"epoch_{epoch}"

    @staticmethod
    def list_checkpoints(root: Path | str) -> List[Tuple[int, int, Path]]:
        """
        List checkpoints under a root, oldest first.

        Returns:
            (phase, epoch, path) tuples sorted by phase then epoch
        """
        root = Path(root)
        found = []
        if not root.is_dir():
            return found
        for phase_dir in root.iterdir():
            phase_match = _PHASE_DIR.match(phase_dir.name)
            if not phase_match or not phase_dir.is_dir():
                continue
            for epoch_dir in phase_dir.iterdir():
                epoch_match = _EPOCH_DIR.match(epoch_dir.name)
                if epoch_match and epoch_dir.is_dir():
                    found.append((int(phase_match.group(1)), int(epoch_match.group(1)), epoch_dir))
        return sorted(found, key=lambda item: (item[0], item[1]))

    def latest_checkpoint(self, root: Path | str) -> Optional[Path]:
        """Most recent checkpoint directory, or None."""
        checkpoints = self.list_checkpoints(root)
        return checkpoints[-1][2] if checkpoints else None

    def resolve_checkpoint(self, path: Path | str) -> Path:
        """
        A checkpoint directory, or the newest checkpoint under a checkpoint root.

        Args:
            path: Checkpoint directory or root holding phase{P}/epoch_N directories

        Returns:
            Checkpoint directory (unchanged if nothing newer is found)
        """
        path = self.resolve_input(path)
        if (path / CHECKPOINT_META).is_file():
            return path
        latest = self.latest_checkpoint(path)
        if latest is None:
            return path
        log.info(f"Resolved checkpoint root {path} to {latest}")
        return latest


# Global file manager instance
file_manager = FileManager()
