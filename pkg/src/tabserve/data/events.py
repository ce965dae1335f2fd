"""Directory watcher: each new file triggers exactly one ingestion job.

Delivery is at-least-once with idempotent dedup by SHA-256 of the file
content; a second drop of identical bytes is a no-op. Failures (unreadable
files, handler exceptions) are recorded and do not stop the watcher.
"""
from __future__ import annotations

import hashlib
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from ..errors import ConfigurationError


@dataclass(frozen=True)
class IngestionJob:
    path: Path
    content_hash: str


@dataclass(frozen=True)
class FailureEvent:
    path: Path
    reason: str


class DirectoryWatcher:
    def __init__(self, directory, handler: Callable[[Path, bytes], None],
                 poll_interval: float = 0.2, pattern: str = "*.csv"):
        self.directory = Path(directory)
        if not self.directory.is_dir():
            raise ConfigurationError(f"watched directory {self.directory} does not exist")
        self.handler = handler
        self.poll_interval = poll_interval
        self.pattern = pattern
        self.jobs: list[IngestionJob] = []
        self.failures: list[FailureEvent] = []
        self._seen_hashes: set[str] = set()
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None

    def scan(self) -> list[IngestionJob]:
        """One synchronous pass; returns the jobs triggered by this pass."""
        triggered: list[IngestionJob] = []
        for path in sorted(self.directory.glob(self.pattern)):
            try:
                content = path.read_bytes()
            except OSError as exc:
                self.failures.append(FailureEvent(path, f"unreadable: {exc}"))
                continue
            digest = hashlib.sha256(content).hexdigest()
            if digest in self._seen_hashes:
                continue
            self._seen_hashes.add(digest)
            job = IngestionJob(path=path, content_hash=digest)
            try:
                self.handler(path, content)
            except Exception as exc:  # isolate handler faults per file
                self.failures.append(FailureEvent(path, f"handler failed: {exc}"))
                continue
            self.jobs.append(job)
            triggered.append(job)
        return triggered

    def start(self) -> None:
        if self._thread is not None:
            return
        self._stop.clear()

        def loop() -> None:
            while not self._stop.is_set():
                self.scan()
                self._stop.wait(self.poll_interval)

        self._thread = threading.Thread(target=loop, name="dir-watcher", daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None
        # final sweep so files dropped right before stop are not lost
        self.scan()
