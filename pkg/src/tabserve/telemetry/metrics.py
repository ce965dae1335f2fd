"""Metrics registry: exact nearest-rank percentiles, counters, gauges.

Percentiles are computed over a bounded ring of retained samples by sorting
a copy at snapshot time. At desk scale exactness is affordable; it also
gives the tests a trivially checkable oracle.
"""
from __future__ import annotations

import math
import threading
import time
from collections import deque
from dataclasses import dataclass

from ..errors import ConfigurationError

DEFAULT_RING_CAPACITY = 65536


@dataclass(frozen=True)
class PercentileSnapshot:
    p50: float
    p95: float
    p99: float
    count: int                    # samples in the retained window
    window_start: float
    window_end: float

    def __post_init__(self) -> None:
        assert self.p50 <= self.p95 <= self.p99


def nearest_rank(sorted_values, q: float) -> float:
    """The ceil(q*n)-th smallest value (1-based nearest-rank definition)."""
    n = len(sorted_values)
    idx = max(0, math.ceil(q * n) - 1)
    return sorted_values[idx]


class LatencyRecorder:
    def __init__(self, capacity: int = DEFAULT_RING_CAPACITY, clock=time.time):
        self._stages: dict[str, deque] = {}
        self._counts: dict[str, int] = {}
        self._sums: dict[str, float] = {}
        self.capacity = capacity
        self._clock = clock
        self._lock = threading.Lock()
        self.instrumentation_errors = 0

    def record(self, stage: str, latency_ms: float) -> None:
        if not (isinstance(latency_ms, (int, float)) and math.isfinite(latency_ms)
                and latency_ms >= 0):
            with self._lock:
                self.instrumentation_errors += 1
            return
        with self._lock:
            ring = self._stages.get(stage)
            if ring is None:
                ring = deque(maxlen=self.capacity)
                self._stages[stage] = ring
                self._counts[stage] = 0
                self._sums[stage] = 0.0
            ring.append((self._clock(), float(latency_ms)))
            self._counts[stage] += 1
            self._sums[stage] += latency_ms

    def stages(self) -> list[str]:
        with self._lock:
            return sorted(self._stages)

    def count(self, stage: str) -> int:
        with self._lock:
            return self._counts.get(stage, 0)

    def samples(self, stage: str) -> list[float]:
        with self._lock:
            return [v for _, v in self._stages.get(stage, ())]

    def snapshot(self, stage: str) -> PercentileSnapshot | None:
        with self._lock:
            ring = self._stages.get(stage)
            if not ring:
                return None
            items = list(ring)
        values = sorted(v for _, v in items)
        return PercentileSnapshot(
            p50=nearest_rank(values, 0.50),
            p95=nearest_rank(values, 0.95),
            p99=nearest_rank(values, 0.99),
            count=len(values),
            window_start=items[0][0],
            window_end=items[-1][0],
        )


def throughput_window(completions: int, window_s: float) -> float:
    """Completed samples divided by the elapsed window."""
    if window_s <= 0:
        raise ConfigurationError("window must be > 0")
    return completions / window_s


class BusyTracker:
    """Busy-time fraction of an executor; stands in for a hardware utilization gauge."""

    def __init__(self, clock=time.monotonic):
        self._clock = clock
        self._lock = threading.Lock()
        self._busy_total = 0.0
        self._started = clock()
        self._window_busy = 0.0
        self._window_start = self._started

    def add_busy(self, seconds: float) -> None:
        with self._lock:
            self._busy_total += seconds
            self._window_busy += seconds

    def utilization(self, *, reset_window: bool = False) -> float:
        with self._lock:
            now = self._clock()
            elapsed = max(now - self._window_start, 1e-9)
            frac = min(self._window_busy / elapsed, 1.0)
            if reset_window:
                self._window_busy = 0.0
                self._window_start = now
            return frac


class MetricsRegistry:
    """Monotone counters, gauges, and per-stage latency recorders."""

    def __init__(self, latency_capacity: int = DEFAULT_RING_CAPACITY, clock=time.time):
        self.latency = LatencyRecorder(latency_capacity, clock=clock)
        self._counters: dict[str, float] = {}
        self._gauges: dict[str, float] = {}
        self._lock = threading.Lock()

    def inc(self, name: str, amount: float = 1.0) -> None:
        if amount < 0:
            raise ConfigurationError("counters are monotone; increment must be >= 0")
        with self._lock:
            self._counters[name] = self._counters.get(name, 0.0) + amount

    def set_gauge(self, name: str, value: float) -> None:
        with self._lock:
            self._gauges[name] = float(value)

    def counter(self, name: str) -> float:
        with self._lock:
            return self._counters.get(name, 0.0)

    def gauge(self, name: str) -> float:
        with self._lock:
            return self._gauges.get(name, 0.0)

    def counters(self) -> dict[str, float]:
        with self._lock:
            return dict(self._counters)

    def gauges(self) -> dict[str, float]:
        with self._lock:
            return dict(self._gauges)

    def current_values(self) -> dict[str, float]:
        """Flat view used by alert evaluation: counters, gauges, percentiles."""
        out = dict(self.counters())
        out.update(self.gauges())
        for stage in self.latency.stages():
            snap = self.latency.snapshot(stage)
            if snap is not None:
                out[f"latency_{stage}_p50_ms"] = snap.p50
                out[f"latency_{stage}_p95_ms"] = snap.p95
                out[f"latency_{stage}_p99_ms"] = snap.p99
        return out
