"""Bounded FIFO request queue and deadline-based batch formation.

Exactly one batch former consumes the queue; a batch closes when it reaches
``max_batch`` requests or the oldest queued request has waited ``max_delay_ms``.
"""
from __future__ import annotations

import threading
import time
from collections import deque
from concurrent.futures import Future
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError, QueueFullError


@dataclass
class InferenceRequest:
    request_id: str
    features: np.ndarray          # (records, feature_count)
    token: str | bytes | None = None
    peer: str = "local"
    received_at_ns: int = 0

    def __post_init__(self) -> None:
        self.features = np.atleast_2d(np.asarray(self.features, dtype=np.float64))


@dataclass(frozen=True)
class BatcherConfig:
    max_batch: int = 256
    max_delay_ms: float = 5.0
    queue_capacity: int = 1024

    def __post_init__(self) -> None:
        if self.max_batch < 1:
            raise ConfigurationError("max_batch must be >= 1")
        if self.max_delay_ms < 0:
            raise ConfigurationError("max_delay_ms must be >= 0")
        if self.queue_capacity < 1:
            raise ConfigurationError("queue_capacity must be >= 1")


@dataclass
class Ticket:
    request_id: str
    future: Future = field(default_factory=Future)


@dataclass
class QueuedItem:
    request: InferenceRequest
    ticket: Ticket


class RequestQueue:
    def __init__(self, capacity: int, *, on_depth=None, clock_ns=time.monotonic_ns):
        self.capacity = capacity
        self._items: deque[QueuedItem] = deque()
        self._cond = threading.Condition()
        self._on_depth = on_depth
        self._clock_ns = clock_ns
        self.accepted = 0
        self.rejected_backpressure = 0

    def _report_depth(self) -> None:
        if self._on_depth is not None:
            self._on_depth(len(self._items))

    @property
    def depth(self) -> int:
        with self._cond:
            return len(self._items)

    def put(self, request: InferenceRequest) -> Ticket:
        """Enqueue FIFO; raises :class:`QueueFullError` at capacity."""
        with self._cond:
            if len(self._items) >= self.capacity:
                self.rejected_backpressure += 1
                raise QueueFullError(f"queue at capacity {self.capacity}")
            if request.received_at_ns == 0:
                request.received_at_ns = self._clock_ns()
            ticket = Ticket(request_id=request.request_id)
            self._items.append(QueuedItem(request=request, ticket=ticket))
            self.accepted += 1
            self._report_depth()
            self._cond.notify_all()
            return ticket

    def form_batch(self, config: BatcherConfig, *, stop: threading.Event | None = None,
                   poll_s: float = 0.05) -> list[QueuedItem]:
        """Block until a batch closes; empty list only when ``stop`` is set."""
        deadline_ns = None
        with self._cond:
            while True:
                if stop is not None and stop.is_set() and not self._items:
                    return []
                if self._items:
                    if deadline_ns is None:
                        deadline_ns = (self._items[0].request.received_at_ns
                                       + int(config.max_delay_ms * 1e6))
                    now = self._clock_ns()
                    if len(self._items) >= config.max_batch or now >= deadline_ns:
                        take = min(len(self._items), config.max_batch)
                        batch = [self._items.popleft() for _ in range(take)]
                        self._report_depth()
                        return batch
                    wait_s = min((deadline_ns - now) / 1e9, poll_s)
                else:
                    deadline_ns = None
                    wait_s = poll_s
                self._cond.wait(timeout=max(wait_s, 0.0))
