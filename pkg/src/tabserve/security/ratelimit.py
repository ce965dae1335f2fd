"""Per-principal token buckets."""
from __future__ import annotations

import threading
import time
from dataclasses import dataclass

from ..errors import ConfigurationError


@dataclass(frozen=True)
class RateDecision:
    allowed: bool
    retry_after_s: float = 0.0
    tokens_left: float = 0.0


class TokenBucketLimiter:
    """Each principal gets its own bucket, created at full capacity."""

    def __init__(self, capacity: float, refill_rate: float, clock=time.monotonic):
        if capacity < 1 or refill_rate < 0:
            raise ConfigurationError("capacity must be >= 1 and refill_rate >= 0")
        self.capacity = float(capacity)
        self.refill_rate = float(refill_rate)
        self._clock = clock
        self._buckets: dict[str, tuple[float, float]] = {}   # principal -> (tokens, t)
        self._lock = threading.Lock()

    def check(self, principal: str) -> RateDecision:
        with self._lock:
            now = self._clock()
            tokens, last = self._buckets.get(principal, (self.capacity, now))
            tokens = min(self.capacity, tokens + (now - last) * self.refill_rate)
            if tokens >= 1.0:
                tokens -= 1.0
                self._buckets[principal] = (tokens, now)
                return RateDecision(True, 0.0, tokens)
            self._buckets[principal] = (tokens, now)
            retry = ((1.0 - tokens) / self.refill_rate
                     if self.refill_rate > 0 else float("inf"))
            return RateDecision(False, retry, tokens)
