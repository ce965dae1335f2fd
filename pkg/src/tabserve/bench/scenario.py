"""Benchmark scenario description and fingerprinting."""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass
from pathlib import Path

from ..errors import ConfigurationError

SCENARIO_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Scenario:
    dataset: str = "hr"
    batch_sizes: tuple = (100, 500, 1000)
    security_preset: str = "baseline"
    repetitions: int = 10
    requests_per_rep: int = 20
    warmup_requests: int = 5
    clients: int = 4
    arrival: str = "closed"       # closed-loop or open-loop poisson
    arrival_rate: float = 0.0     # req/s, poisson only
    seed: int = 0

    def __post_init__(self) -> None:
        if self.repetitions < 1:
            raise ConfigurationError("repetitions must be >= 1")
        if any(b < 1 for b in self.batch_sizes):
            raise ConfigurationError("batch sizes must be >= 1")
        if self.arrival not in ("closed", "poisson"):
            raise ConfigurationError(f"unknown arrival pattern {self.arrival!r}")
        if self.arrival == "poisson" and self.arrival_rate <= 0:
            raise ConfigurationError("poisson arrival needs arrival_rate > 0")

    def to_json(self) -> str:
        doc = {"version": SCENARIO_SCHEMA_VERSION, **asdict(self)}
        doc["batch_sizes"] = list(self.batch_sizes)
        return json.dumps(doc, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, source) -> "Scenario":
        if isinstance(source, (str, Path)) and Path(str(source)).exists():
            doc = json.loads(Path(source).read_text())
        else:
            doc = json.loads(source) if isinstance(source, (str, bytes)) else source
        version = doc.pop("version", None)
        if version != SCENARIO_SCHEMA_VERSION:
            raise ConfigurationError(
                f"scenario schema version {version!r} != {SCENARIO_SCHEMA_VERSION}")
        doc["batch_sizes"] = tuple(doc.get("batch_sizes", (100, 500, 1000)))
        return cls(**doc)

    def fingerprint(self, model_version: str) -> str:
        payload = self.to_json() + "|" + model_version
        return hashlib.sha256(payload.encode()).hexdigest()[:16]
