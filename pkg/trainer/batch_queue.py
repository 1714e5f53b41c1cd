"""
Bounded prefetch queue for training batches.
A producer thread draws negatives for each batch ahead of the consumer.
"""
import queue
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Iterator, List, Optional

import numpy as np

from config.settings import settings
from model.negative import NegSampler
from trainer.batching import Batch
from utils.logger import log

_POLL_SECONDS = 0.1


class _EndOfStream:
    pass


class _ProducerFailure:
    def __init__(self, error: BaseException):
        self.error = error


class BatchQueue:
    """FIFO stream of batches with negatives attached."""

    def __init__(
        self,
        batches: Iterable[Batch],
        neg_sampler: NegSampler,
        rng: np.random.Generator,
        maxsize: Optional[int] = None
    ):
        """
        Initialize batch queue.

        Args:
            batches: Batches in epoch order
            neg_sampler: Noise distribution
            rng: Generator for negatives (used only by the producer thread)
            maxsize: Queue bound; defaults to settings.prefetch_batches
        """
        self._batches = batches
        self._neg_sampler = neg_sampler
        self._rng = rng
        self._queue: queue.Queue = queue.Queue(maxsize=maxsize or settings.prefetch_batches)
        self._stop = threading.Event()
        self._producer: Optional[threading.Thread] = None

    def start(self) -> 'BatchQueue':
        if self._producer is None:
            self._producer = threading.Thread(target=self._produce, name='batch-producer', daemon=True)
            self._producer.start()
        return self

    def _put(self, item) -> bool:
        while not self._stop.is_set():
            try:
                self._queue.put(item, timeout=_POLL_SECONDS)
                return True
            except queue.Full:
                continue
        return False

    def _produce(self) -> None:
        try:
            for batch in self._batches:
                batch.negatives = self._neg_sampler.draw(self._rng, batch.targets)
                if not self._put(batch):
                    return
            self._put(_EndOfStream())
        except BaseException as e:
            self._put(_ProducerFailure(e))

    def stop(self) -> None:
        """Stop the producer and drop anything still queued."""
        self._stop.set()
        if self._producer is not None:
            self._producer.join()
            self._producer = None

    def __iter__(self) -> Iterator[Batch]:
        self.start()
        try:
            while True:
                item = self._queue.get()
                if isinstance(item, _EndOfStream):
                    return
                if isinstance(item, _ProducerFailure):
                    raise item.error
                yield item
        finally:
            self.stop()

    def consume(self, callback: Callable[[Batch], float]) -> float:
        """
        Process batches in order on the calling thread.

        Returns:
            Sum of callback results
        """
        total = 0.0
        for batch in self:
            total += callback(batch)
        return total

    def consume_parallel(self, callback: Callable[[Batch], float], threads: int) -> float:
        """
        Process batches concurrently without ordering guarantees.

        A semaphore bounds in-flight batches to `threads`; the first error is
        re-raised after in-flight work finishes.
        """
        semaphore = threading.Semaphore(threads)
        results: List[float] = []
        errors: List[BaseException] = []
        lock = threading.Lock()

        def process_with_semaphore(batch: Batch) -> None:
            try:
                value = callback(batch)
                with lock:
                    results.append(value)
            except BaseException as e:
                with lock:
                    errors.append(e)
            finally:
                semaphore.release()

        with ThreadPoolExecutor(max_workers=threads, thread_name_prefix='hogwild') as pool:
            for batch in self:
                semaphore.acquire()
                if errors:
                    semaphore.release()
                    break
                pool.submit(process_with_semaphore, batch)

        if errors:
            log.error(f"[TRAIN] WORKER ERROR | {errors[0]}")
            raise errors[0]
        return float(sum(results))
