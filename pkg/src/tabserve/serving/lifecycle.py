"""Function lifecycle: cold starts, scale-to-zero, keep-warm, probes.

The cold-start delay is simulated with a configurable sleep so the
economics experiments run without real accelerator initialization; the
default sits inside the 3-5s band reported for GPU function loads.
"""
from __future__ import annotations

import threading
import time
from dataclasses import dataclass

UNLOADED = "unloaded"
LOADING = "loading"
WARM = "warm"
DRAINING = "draining"


@dataclass
class ProbeStatus:
    live: bool
    ready: bool
    state: str
    cause: str | None = None


class FunctionLifecycle:
    def __init__(self, load_delay_s: float = 3.5, idle_timeout_s: float = 60.0,
                 loader=None, clock=time.monotonic, sleeper=time.sleep):
        self.load_delay_s = load_delay_s
        self.idle_timeout_s = idle_timeout_s
        self._loader = loader
        self._clock = clock
        self._sleeper = sleeper
        self._lock = threading.RLock()
        self._state = UNLOADED
        self._last_activity = clock()
        self._load_failure: str | None = None
        self.cold_starts = 0
        self.load_seconds_total = 0.0

    @property
    def state(self) -> str:
        with self._lock:
            return self._state

    def probe(self) -> ProbeStatus:
        with self._lock:
            return ProbeStatus(live=True, ready=self._state == WARM,
                               state=self._state, cause=self._load_failure)

    def note_activity(self) -> None:
        with self._lock:
            self._last_activity = self._clock()

    def keep_warm_ping(self) -> None:
        """Counts as activity; resets the idle clock without serving."""
        self.note_activity()

    def ensure_warm(self) -> bool:
        """Drive Unloaded -> Loading -> Warm; returns True if this call paid the cold start."""
        with self._lock:
            while self._state == LOADING:
                # another caller is loading; poll until it finishes
                self._lock.release()
                try:
                    self._sleeper(0.005)
                finally:
                    self._lock.acquire()
            if self._state == WARM:
                self._last_activity = self._clock()
                return False
            self._state = LOADING
            self._load_failure = None
        started = self._clock()
        try:
            self._sleeper(self.load_delay_s)
            if self._loader is not None:
                self._loader()
        except Exception as exc:
            with self._lock:
                self._state = UNLOADED
                self._load_failure = f"model load failed: {exc}"
            raise
        finally:
            self.load_seconds_total += max(self._clock() - started, 0.0)
        with self._lock:
            self._state = WARM
            self._last_activity = self._clock()
            self.cold_starts += 1
        return True

    def check_idle(self) -> bool:
        """Scale to zero when warm and idle past the timeout."""
        with self._lock:
            if (self._state == WARM
                    and self._clock() - self._last_activity > self.idle_timeout_s):
                self._state = UNLOADED
                return True
            return False

    def drain(self) -> None:
        with self._lock:
            self._state = DRAINING
