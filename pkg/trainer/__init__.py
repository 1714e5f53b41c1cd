"""Trainer package initialization."""
from .batching import Batch, SignatureGroups, make_batches
from .batch_queue import BatchQueue
from .trainer import (
    EpochStats, HineTrainer, TrainReport, TrainResult, convergence_check, train_ahine, train_ghine
)

__all__ = [
    'Batch', 'SignatureGroups', 'make_batches',
    'BatchQueue',
    'EpochStats', 'HineTrainer', 'TrainReport', 'TrainResult', 'convergence_check',
    'train_ahine', 'train_ghine',
]
