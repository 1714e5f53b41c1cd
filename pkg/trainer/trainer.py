"""
Training orchestration for single-edge (GHINE) and relation-chain (AHINE) models.

AHINE runs two phases: phase 1 pretrains on single edges, phase 2 trains on
chains of length up to c. Each epoch derives its generator from
(seed, phase, epoch), so a resumed run replays the same batches and negatives
as an uninterrupted one.
"""
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from config.constants import CONVERGENCE_EPSILON, MSG_THROUGHPUT_MODE
from config.settings import settings
from config.train_config import TrainConfig
from graph.hin_graph import HinGraph
from model.checkpoint import load_checkpoint, save_checkpoint
from model.hine_model import HineModel
from model.negative import NegSampler
from model.optimizer import sgd_step
from sampler.edge_sampler import sample_edge_triples
from sampler.records import ChainSample
from trainer.batch_queue import BatchQueue
from trainer.batching import Batch, SignatureGroups
from utils.exceptions import ChainLengthError, DataError, NodeLookupError, NumericalError
from utils.file_manager import file_manager
from utils.logger import log
from utils.progress_tracker import ThroughputMeter, progress_logger

PHASE_GHINE = 1
PHASE_CHAINS = 2


@dataclass
class EpochStats:
    phase: int
    epoch: int
    mean_loss: float
    wall_time: float
    samples_per_sec: float


@dataclass
class TrainReport:
    """Per-epoch statistics and why training stopped."""
    epochs: List[EpochStats] = field(default_factory=list)
    stop_reason: str = ''
    phase_stop_reasons: Dict[int, str] = field(default_factory=dict)

    def losses(self, phase: Optional[int] = None) -> List[float]:
        """Epoch-mean losses, optionally for one phase."""
        return [s.mean_loss for s in self.epochs if phase is None or s.phase == phase]


@dataclass
class TrainResult:
    model: HineModel
    report: TrainReport

    @property
    def embeddings(self) -> np.ndarray:
        return self.model.phi

    @property
    def transforms(self):
        return self.model.transforms


def convergence_check(losses: Sequence[float] | TrainReport, tol: float) -> bool:
    """
    True iff the last relative epoch-loss change is below `tol`.

    With tol = 0 only an exact repeat converges.
    """
    if isinstance(losses, TrainReport):
        losses = losses.losses()
    if len(losses) < 2:
        return False
    previous, current = losses[-2], losses[-1]
    change = abs(current - previous)
    if change == 0:
        return True
    return change / max(previous, CONVERGENCE_EPSILON) < tol


class HineTrainer:
    """Runs training phases over a graph with one TrainConfig."""

    def __init__(
        self,
        graph: HinGraph,
        config: TrainConfig,
        checkpoint_dir: Optional[Path | str] = None,
        threads: Optional[int] = None
    ):
        """
        Initialize trainer.

        Args:
            graph: Graph the samples refer to
            config: Hyperparameters
            checkpoint_dir: Root for phase{P}/epoch_N checkpoints (None = no checkpoints)
            threads: Worker threads; 1 is deterministic, more enables unsynchronized updates
        """
        self.graph = graph
        self.config = config
        self.checkpoint_dir = Path(checkpoint_dir) if checkpoint_dir is not None else None
        self.threads = threads or settings.threads
        self.last_checkpoint: Optional[Path] = None
        if self.threads > 1:
            log.warning(MSG_THROUGHPUT_MODE.format(threads=self.threads))

    def _new_model(self) -> HineModel:
        return HineModel.for_graph(self.graph, self.config)

    def _check_samples(self, samples: List[ChainSample]) -> None:
        c = self.config.max_chain_length
        num_nodes = self.graph.num_nodes
        num_edge_types = len(self.graph.edge_types)
        for sample in samples:
            if sample.length > c:
                raise ChainLengthError(f"sample chain of length {sample.length} exceeds max chain length {c}")
            if not (0 <= sample.first < num_nodes and 0 <= sample.last < num_nodes):
                raise NodeLookupError(f"sample refers to node outside 0..{num_nodes - 1}: {sample}")
            if any(not 0 <= e < num_edge_types for e in sample.relations):
                raise DataError(f"sample refers to unknown edge type: {sample}")

    def _edge_triples(self) -> List[ChainSample]:
        count = self.config.triple_count or self.graph.num_edges
        meter = ThroughputMeter()
        triples = list(sample_edge_triples(self.graph, count, self.config.seed))
        progress_logger.log_samples('edges', len(triples), meter.elapsed)
        return triples

    def _neg_sampler(self, samples: Iterable[ChainSample]) -> NegSampler:
        return NegSampler.from_samples(
            samples,
            self.graph.num_nodes,
            self.config.neg,
            noise=self.config.noise,
            node_type_ids=self.graph.node_type_ids if self.config.typed_negatives else None,
        )

    def _step(self, model: HineModel, batch: Batch) -> float:
        loss, tape = model.batch_loss(batch.signature, batch.sources, batch.targets, batch.negatives)
        if not math.isfinite(loss):
            chain = ','.join(model.edge_type_name(e) for e in batch.signature)
            raise NumericalError("non-finite loss", block=f"batch [{chain}]")
        grads = model.backward(tape, check_stale=self.threads == 1)
        sgd_step(model, grads, self.config.eta_embed, self.config.eta_dnn, self.config.max_grad_norm)
        return loss

    def _save(self, model: HineModel, phase: int, epoch: int, report: TrainReport) -> None:
        if self.checkpoint_dir is None or not self.config.checkpoint_every:
            return
        if epoch % self.config.checkpoint_every:
            return
        directory = file_manager.checkpoint_dir(self.checkpoint_dir, phase, epoch)
        save_checkpoint(model, directory, {
            'phase': phase,
            'epoch': epoch,
            'history': [asdict(s) for s in report.epochs],
            'phase_stop_reasons': {str(k): v for k, v in report.phase_stop_reasons.items()},
            'config': self.config.model_dump(),
        })
        self.last_checkpoint = directory
        progress_logger.log_checkpoint(phase, epoch, str(directory))

    def _run_phase(
        self,
        model: HineModel,
        phase: int,
        name: str,
        samples: List[ChainSample],
        max_epochs: int,
        report: TrainReport,
        start_epoch: int = 0
    ) -> str:
        """
        Train epochs start_epoch+1..max_epochs on one corpus.

        Returns:
            Stop reason ('converged', 'max_iterations' or 'no_samples')
        """
        groups = SignatureGroups(samples)
        progress_logger.log_phase_start(phase, name, groups.num_samples, len(groups), max_epochs)
        if groups.num_samples == 0:
            progress_logger.log_phase_end(phase, 0, 'no_samples')
            return 'no_samples'

        neg_sampler = self._neg_sampler(samples)
        losses = report.losses(phase)
        if start_epoch and convergence_check(losses, self.config.convergence_tol):
            progress_logger.log_phase_end(phase, start_epoch, 'converged')
            return 'converged'

        for epoch in range(start_epoch + 1, max_epochs + 1):
            rng = np.random.default_rng([self.config.seed, phase, epoch])
            batches = groups.batches(self.config.batch_size, rng)
            batch_queue = BatchQueue(batches, neg_sampler, rng)
            meter = ThroughputMeter()
            try:
                if self.threads > 1:
                    total = batch_queue.consume_parallel(lambda b: self._step(model, b), self.threads)
                else:
                    total = batch_queue.consume(lambda b: self._step(model, b))
            except NumericalError as e:
                progress_logger.log_abort(phase, epoch, str(e), str(self.last_checkpoint) if self.last_checkpoint else None)
                raise
            meter.add(groups.num_samples)

            mean_loss = total / groups.num_samples
            if not math.isfinite(mean_loss):
                progress_logger.log_abort(phase, epoch, "non-finite epoch loss", str(self.last_checkpoint) if self.last_checkpoint else None)
                raise NumericalError("non-finite epoch loss", block=f"phase {phase} epoch {epoch}")

            stats = EpochStats(phase, epoch, mean_loss, meter.elapsed, meter.rate)
            report.epochs.append(stats)
            losses.append(mean_loss)
            progress_logger.log_epoch(phase, epoch, mean_loss, stats.wall_time, stats.samples_per_sec)
            self._save(model, phase, epoch, report)

            if convergence_check(losses, self.config.convergence_tol):
                progress_logger.log_phase_end(phase, epoch, 'converged')
                return 'converged'

        progress_logger.log_phase_end(phase, max_epochs, 'max_iterations')
        return 'max_iterations'

    def _resume(self, resume: Path | str) -> tuple[HineModel, int, int, TrainReport]:
        """Load a checkpoint into a fresh model; returns (model, phase, epoch, report)."""
        restored, meta = load_checkpoint(resume, dtype=self.config.dtype)
        model = self._new_model()
        model.load_state(restored)
        report = TrainReport(
            epochs=[EpochStats(**s) for s in meta.get('history', [])],
            phase_stop_reasons={int(k): v for k, v in meta.get('phase_stop_reasons', {}).items()},
        )
        log.info(f"[TRAIN] RESUME | path={resume} | phase={meta['phase']} | epoch={meta['epoch']}")
        return model, int(meta['phase']), int(meta['epoch']), report

    def train_ghine(self, samples: Optional[Iterable[ChainSample]] = None, resume: Optional[Path | str] = None) -> TrainResult:
        """
        Single-edge training.

        Args:
            samples: Length-1 samples; drawn from the graph's edges when omitted
            resume: Phase-1 checkpoint to continue from

        Returns:
            Trained model and report
        """
        samples = list(samples) if samples is not None else self._edge_triples()
        if any(s.length != 1 for s in samples):
            raise ChainLengthError("single-edge training takes only length-1 samples")
        self._check_samples(samples)

        if resume is not None:
            model, phase, epoch, report = self._resume(resume)
            if phase != PHASE_GHINE:
                raise DataError(f"checkpoint {resume} is from phase {phase}, single-edge training needs phase 1")
        else:
            model, epoch, report = self._new_model(), 0, TrainReport()

        reason = self._run_phase(model, PHASE_GHINE, 'GHINE', samples, self.config.max_iterations, report, epoch)
        report.phase_stop_reasons[PHASE_GHINE] = reason
        report.stop_reason = reason
        return TrainResult(model, report)

    def train_ahine(self, samples: Iterable[ChainSample], resume: Optional[Path | str] = None) -> TrainResult:
        """
        Two-phase chain training.

        Phase 1 pretrains on the corpus' length-1 samples (edge triples drawn
        from the graph if the corpus has none) for pretrain_epochs. Phase 2
        trains on the full corpus, or only chains longer than 1 when
        phase2_single_edges is off, for up to max_iterations epochs.
        With c = 1 this is single-edge training.

        Args:
            samples: Chain samples with lengths 1..c
            resume: Checkpoint from either phase

        Returns:
            Trained model and report
        """
        samples = list(samples)
        if self.config.max_chain_length == 1:
            return self.train_ghine(samples, resume=resume)
        self._check_samples(samples)

        phase, epoch = PHASE_GHINE, 0
        if resume is not None:
            model, phase, epoch, report = self._resume(resume)
        else:
            model, report = self._new_model(), TrainReport()

        if phase == PHASE_GHINE:
            singles = [s for s in samples if s.length == 1]
            if not singles and self.config.pretrain_epochs:
                singles = self._edge_triples()
            reason = self._run_phase(model, PHASE_GHINE, 'GHINE pretraining', singles, self.config.pretrain_epochs, report, epoch)
            report.phase_stop_reasons[PHASE_GHINE] = reason
            epoch = 0

        chain_samples = samples if self.config.phase2_single_edges else [s for s in samples if s.length > 1]
        reason = self._run_phase(model, PHASE_CHAINS, 'AHINE', chain_samples, self.config.max_iterations, report, epoch)
        report.phase_stop_reasons[PHASE_CHAINS] = reason
        report.stop_reason = reason
        return TrainResult(model, report)


def train_ghine(
    graph: HinGraph,
    config: TrainConfig,
    samples: Optional[Iterable[ChainSample]] = None,
    checkpoint_dir: Optional[Path | str] = None,
    resume: Optional[Path | str] = None,
    threads: Optional[int] = None
) -> TrainResult:
    """Single-edge training; see HineTrainer.train_ghine."""
    return HineTrainer(graph, config, checkpoint_dir, threads).train_ghine(samples, resume)


def train_ahine(
    graph: HinGraph,
    config: TrainConfig,
    samples: Iterable[ChainSample],
    checkpoint_dir: Optional[Path | str] = None,
    resume: Optional[Path | str] = None,
    threads: Optional[int] = None
) -> TrainResult:
    """Two-phase chain training; see HineTrainer.train_ahine."""
    return HineTrainer(graph, config, checkpoint_dir, threads).train_ahine(samples, resume)
