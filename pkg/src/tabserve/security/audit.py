"""Hash-chained audit log with asynchronous persistence.

Each record's hash covers the previous hash plus the record's canonical
bytes, so editing any persisted record breaks verification at or before it.
Hashing and sequencing happen synchronously on the request path; only the
file write is handed to a background thread (bounded buffer, overflow
counted rather than blocking).
"""
from __future__ import annotations

import hashlib
import json
import queue
import threading
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from .redaction import DEFAULT_RULES, redact_record

GENESIS_HASH = "0" * 64


@dataclass(frozen=True)
class AuditRecord:
    sequence: int
    timestamp: float
    subject: str
    endpoint: str
    input_digest: str
    model_version: str
    outcome: str
    context: dict
    prev_hash: str
    this_hash: str


def canonical_bytes(fields: dict) -> bytes:
    """Canonical serialization of everything except ``this_hash``."""
    body = {k: v for k, v in fields.items() if k != "this_hash"}
    return json.dumps(body, sort_keys=True, separators=(",", ":")).encode()


def chain_hash(prev_hash_hex: str, canonical: bytes) -> str:
    return hashlib.sha256(bytes.fromhex(prev_hash_hex) + canonical).hexdigest()


class AuditLog:
    def __init__(self, path, redaction_rules=DEFAULT_RULES, buffer_size: int = 8192,
                 clock=time.time):
        self.path = Path(path)
        self.rules = redaction_rules
        self._clock = clock
        self._lock = threading.Lock()
        self._sequence = 0
        self._tip = GENESIS_HASH
        self._queue: queue.Queue = queue.Queue(maxsize=buffer_size)
        self.overflow_count = 0
        self.flush_failures = 0
        self._stop = threading.Event()
        self._writer = threading.Thread(target=self._writer_loop, name="audit-writer",
                                        daemon=True)
        self._writer.start()

    def _writer_loop(self) -> None:
        while True:
            try:
                line = self._queue.get(timeout=0.1)
            except queue.Empty:
                if self._stop.is_set():
                    return
                continue
            try:
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(line + "\n")
            except OSError:
                self.flush_failures += 1
            finally:
                self._queue.task_done()

    def append(self, *, subject: str, endpoint: str, input_digest: str,
               model_version: str, outcome: str, context: dict | None = None) -> AuditRecord:
        """Redact, chain, and enqueue one record; never blocks on disk."""
        redacted = redact_record(
            {"subject": subject, "endpoint": endpoint, "context": context or {}},
            self.rules)
        with self._lock:
            self._sequence += 1
            fields = {
                "sequence": self._sequence,
                "timestamp": self._clock(),
                "subject": redacted["subject"],
                "endpoint": redacted["endpoint"],
                "input_digest": input_digest,
                "model_version": model_version,
                "outcome": outcome,
                "context": redacted["context"],
                "prev_hash": self._tip,
            }
            this_hash = chain_hash(self._tip, canonical_bytes(fields))
            fields["this_hash"] = this_hash
            self._tip = this_hash
        record = AuditRecord(**fields)
        line = json.dumps(fields, sort_keys=True, separators=(",", ":"))
        try:
            self._queue.put_nowait(line)
        except queue.Full:
            self.overflow_count += 1   # availability over persistence; gap is detectable
        return record

    def flush(self, timeout: float = 5.0) -> None:
        deadline = time.monotonic() + timeout
        while not self._queue.empty() and time.monotonic() < deadline:
            time.sleep(0.01)

    def close(self) -> None:
        self.flush()
        self._stop.set()
        self._writer.join(timeout=5)


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    first_bad_sequence: int | None
    records_checked: int


def verify_audit_chain(path) -> VerifyResult:
    """Recompute the full chain from disk; report the first broken record."""
    prev = GENESIS_HASH
    expected_seq = 1
    checked = 0
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except FileNotFoundError:
        return VerifyResult(True, None, 0)
    for line in lines:
        if not line.strip():
            continue
        try:
            fields = json.loads(line)
            seq = fields["sequence"]
            declared = fields["this_hash"]
        except (ValueError, KeyError, TypeError):
            return VerifyResult(False, expected_seq, checked)
        if seq != expected_seq or fields.get("prev_hash") != prev:
            return VerifyResult(False, seq if isinstance(seq, int) else expected_seq, checked)
        if chain_hash(prev, canonical_bytes(fields)) != declared:
            return VerifyResult(False, seq, checked)
        prev = declared
        expected_seq += 1
        checked += 1
    return VerifyResult(True, None, checked)
