"""Inference service: queue -> batcher -> security chain -> forward pass.

Accounting invariant: every accepted ticket is resolved with either a
result payload or an explicit error payload; nothing is dropped.
"""
from __future__ import annotations

import threading
import time
import queue as queue_mod

import numpy as np

from ..errors import QueueFullError
from ..model.network import TabNetModel
from ..security.chain import ChainOutcome, RequestContext, SecurityChain
from ..telemetry.metrics import BusyTracker, MetricsRegistry
from .batching import BatcherConfig, InferenceRequest, QueuedItem, RequestQueue, Ticket
from .lifecycle import FunctionLifecycle


class InferenceService:
    def __init__(self, model: TabNetModel, chain: SecurityChain,
                 batcher: BatcherConfig | None = None,
                 lifecycle: FunctionLifecycle | None = None,
                 registry: MetricsRegistry | None = None,
                 parallelism: int = 1, compute_retries: int = 1,
                 janitor_interval_s: float = 0.5):
        self.model = model
        self.chain = chain
        self.batcher_config = batcher or BatcherConfig()
        self.lifecycle = lifecycle or FunctionLifecycle(load_delay_s=0.0, idle_timeout_s=3600)
        self.registry = registry or MetricsRegistry()
        self.busy = BusyTracker()
        self.parallelism = parallelism
        self.compute_retries = compute_retries
        self.janitor_interval_s = janitor_interval_s
        self.queue = RequestQueue(
            self.batcher_config.queue_capacity,
            on_depth=lambda d: self.registry.set_gauge("queue_depth", d))
        self._dispatch: queue_mod.Queue = queue_mod.Queue()
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []
        self.responses = 0
        self.error_responses = 0
        self._count_lock = threading.Lock()

    # -- lifecycle -------------------------------------------------------

    def start(self) -> "InferenceService":
        self._stop.clear()
        batcher = threading.Thread(target=self._batcher_loop, name="batcher", daemon=True)
        self._threads = [batcher]
        for i in range(self.parallelism):
            self._threads.append(threading.Thread(
                target=self._worker_loop, name=f"worker-{i}", daemon=True))
        self._threads.append(threading.Thread(
            target=self._janitor_loop, name="janitor", daemon=True))
        for t in self._threads:
            t.start()
        return self

    def stop(self) -> None:
        self._stop.set()
        for t in self._threads:
            t.join(timeout=10)
        self._threads = []

    def _janitor_loop(self) -> None:
        while not self._stop.wait(self.janitor_interval_s):
            self.lifecycle.check_idle()

    # -- request path ------------------------------------------------------

    def submit(self, request: InferenceRequest) -> Ticket:
        """Enqueue or raise :class:`QueueFullError`; rejection is counted."""
        try:
            ticket = self.queue.put(request)
        except QueueFullError:
            self.registry.inc("backpressure_rejections_total")
            raise
        self.registry.inc("inference_requests_total")
        return ticket

    def keep_warm_ping(self) -> None:
        self.lifecycle.keep_warm_ping()
        self.registry.inc("keep_warm_pings_total")

    def _batcher_loop(self) -> None:
        while True:
            batch = self.queue.form_batch(self.batcher_config, stop=self._stop)
            if not batch:
                if self._stop.is_set():
                    return
                continue
            self._dispatch.put(batch)

    def _worker_loop(self) -> None:
        while True:
            try:
                batch: list[QueuedItem] = self._dispatch.get(timeout=0.1)
            except queue_mod.Empty:
                if self._stop.is_set():
                    return
                continue
            try:
                self._process_batch(batch)
            except Exception as exc:  # defensive: never lose a ticket
                for item in batch:
                    self._resolve_error(item, f"internal: {exc}")

    def _process_batch(self, batch: list[QueuedItem]) -> None:
        dequeue_ns = time.monotonic_ns()
        cold = self.lifecycle.ensure_warm()
        if cold:
            self.registry.inc("cold_starts_total")

        outcomes: list[ChainOutcome] = []
        contexts: list[RequestContext] = []
        allowed: list[int] = []
        for i, item in enumerate(batch):
            req = item.request
            ctx = RequestContext(request_id=req.request_id, peer=req.peer,
                                 endpoint="/infer", token=req.token,
                                 payload=req.features.tolist(),
                                 received_at_ns=req.received_at_ns)
            outcome = self.chain.pre(ctx)
            contexts.append(ctx)
            outcomes.append(outcome)
            if outcome.allowed:
                allowed.append(i)
            else:
                self.registry.inc("security_rejections_total")
                self.registry.inc(f"security_rejections_{outcome.reject_reason}_total")

        results = None
        compute_ms = 0.0
        if allowed:
            rows = np.vstack([batch[i].request.features for i in allowed])
            attempts = 0
            while True:
                t0 = time.perf_counter()
                try:
                    results = self.model.apply(rows)
                    compute_ms = (time.perf_counter() - t0) * 1000.0
                    break
                except Exception as exc:
                    attempts += 1
                    self.registry.inc("compute_failures_total")
                    if attempts > self.compute_retries:
                        for i in allowed:
                            self._finish(batch[i], contexts[i], outcomes[i],
                                         error=f"compute failed: {exc}",
                                         queue_ms=(dequeue_ns - batch[i].request.received_at_ns) / 1e6,
                                         compute_ms=0.0)
                        allowed = []
                        break
            if results is not None:
                self.busy.add_busy(compute_ms / 1000.0)
                self.registry.inc("forward_passes_total")
                self.registry.inc("forward_rows_total", rows.shape[0])

        offset = 0
        for i, item in enumerate(batch):
            if not outcomes[i].allowed:
                self._finish(item, contexts[i], outcomes[i],
                             error=outcomes[i].reject_reason,
                             queue_ms=(dequeue_ns - item.request.received_at_ns) / 1e6,
                             compute_ms=0.0)
                continue
            if results is None:
                continue  # already resolved by the retry-exhausted path
            n = item.request.features.shape[0]
            sl = slice(offset, offset + n)
            offset += n
            records = []
            for j in range(sl.start, sl.stop):
                records.append({
                    "prediction": int(np.argmax(results.probabilities[j])),
                    "probabilities": results.probabilities[j].tolist(),
                    "masks": results.masks[:, j, :].tolist(),
                    "importance": results.importance[j].tolist(),
                })
            self._finish(item, contexts[i], outcomes[i], records=records,
                         queue_ms=(dequeue_ns - item.request.received_at_ns) / 1e6,
                         compute_ms=compute_ms)
        self.lifecycle.note_activity()

    def _finish(self, item: QueuedItem, ctx: RequestContext, outcome: ChainOutcome,
                *, queue_ms: float, compute_ms: float,
                records: list | None = None, error: str | None = None) -> None:
        result_tag = "ok" if error is None else f"error:{error}"
        self.chain.post(ctx, outcome, model_version=self.model.model_version,
                        result=result_tag)
        security_ms = outcome.security_ms
        self.registry.latency.record("queue", queue_ms)
        self.registry.latency.record("security", security_ms)
        self.registry.latency.record("compute", compute_ms)
        total_ms = (time.monotonic_ns() - item.request.received_at_ns) / 1e6
        self.registry.latency.record("total", total_ms)
        payload = {
            "id": item.request.request_id,
            "model_version": self.model.model_version,
            "latency_ms": {"queue": queue_ms, "security": security_ms,
                           "compute": compute_ms},
        }
        with self._count_lock:
            if error is None:
                payload["results"] = records
                self.responses += 1
                self.registry.inc("inference_responses_total")
            else:
                payload["error"] = error
                self.error_responses += 1
                self.registry.inc("inference_errors_total")
        item.ticket.future.set_result(payload)

    # -- observability -----------------------------------------------------

    def refresh_gauges(self) -> None:
        self.registry.set_gauge("synthetic_gpu_utilization", self.busy.utilization())
        self.registry.set_gauge("queue_depth", self.queue.depth)
        if self.chain.audit_log is not None:
            self.registry.set_gauge("audit_buffer_depth",
                                    self.chain.audit_log._queue.qsize())
            self.registry.set_gauge("audit_overflow_total",
                                    self.chain.audit_log.overflow_count)
