"""Cost-per-1K arithmetic, break-even scan, and deployment recommendations."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ConfigurationError, InvalidInputError

PRICING_SCHEMA_VERSION = 1


def cost_per_1k(price_per_hour: float, node_count: int, throughput: float) -> float:
    """(hourly price x nodes / 3600) x (1000 / throughput in samples/s)."""
    if throughput <= 0:
        raise InvalidInputError("throughput must be > 0")
    if price_per_hour < 0 or node_count < 1:
        raise InvalidInputError("price must be >= 0 and node_count >= 1")
    return (price_per_hour * node_count / 3600.0) * (1000.0 / throughput)


@dataclass(frozen=True)
class PricingModel:
    name: str
    price_per_hour: float
    nodes: int
    curve: dict = field(default_factory=dict)   # batch size -> samples/s

    def __post_init__(self) -> None:
        if self.price_per_hour < 0:
            raise ConfigurationError("price_per_hour must be >= 0")
        if any(t <= 0 for t in self.curve.values()):
            raise ConfigurationError("throughputs must be > 0")

    def throughput(self, batch: int) -> float:
        try:
            return self.curve[batch]
        except KeyError:
            raise ConfigurationError(f"{self.name}: no throughput for batch {batch}")

    def cost_at(self, batch: int) -> float:
        return cost_per_1k(self.price_per_hour, self.nodes, self.throughput(batch))


def load_pricing(source) -> dict[str, PricingModel]:
    """Parse the pricing JSON config (versioned schema)."""
    if isinstance(source, (str, Path)) and Path(source).exists():
        doc = json.loads(Path(source).read_text())
    elif isinstance(source, (str, bytes)):
        doc = json.loads(source)
    else:
        doc = source
    if doc.get("version") != PRICING_SCHEMA_VERSION:
        raise ConfigurationError(
            f"pricing schema version {doc.get('version')!r} != {PRICING_SCHEMA_VERSION}")
    models = {}
    for entry in doc.get("configurations", []):
        curve = {int(p["batch"]): float(p["throughput"]) for p in entry.get("curve", [])}
        models[entry["name"]] = PricingModel(
            name=entry["name"], price_per_hour=float(entry["price_per_hour"]),
            nodes=int(entry.get("nodes", 1)), curve=curve)
    if not models:
        raise ConfigurationError("pricing config has no configurations")
    return models


def break_even_batch(a: PricingModel, b: PricingModel) -> int | None:
    """Smallest shared grid batch where cost(a) <= cost(b); None if never."""
    if set(a.curve) != set(b.curve):
        raise ConfigurationError(
            f"curves of {a.name!r} and {b.name!r} are on different batch grids")
    for batch in sorted(a.curve):
        if a.cost_at(batch) <= b.cost_at(batch):
            return batch
    return None


LABELS = ("cpu", "mixed", "gpu_cost_effective", "gpu_strongly_preferred")


@dataclass(frozen=True)
class RecommendationThresholds:
    """Cost-ratio (gpu/cpu) cutoffs; defaults calibrated to the reference table."""
    cpu_over: float = 1.25
    mixed_low: float = 0.8
    gpu_low: float = 0.4


@dataclass(frozen=True)
class Recommendation:
    batch_low: int
    batch_high: int | None        # None = open-ended upper bucket
    label: str
    gpu_cost: float
    cpu_cost: float


def recommend(gpu_cost: float, cpu_cost: float,
              thresholds: RecommendationThresholds = RecommendationThresholds()) -> str:
    if gpu_cost <= 0 or cpu_cost <= 0:
        raise InvalidInputError("costs must be > 0")
    ratio = gpu_cost / cpu_cost
    if ratio > thresholds.cpu_over:
        return "cpu"
    if ratio >= thresholds.mixed_low:
        return "mixed"
    if ratio >= thresholds.gpu_low:
        return "gpu_cost_effective"
    return "gpu_strongly_preferred"


def recommendation_table(buckets, thresholds=RecommendationThresholds()
                         ) -> list[Recommendation]:
    """Label each (low, high, gpu_cost, cpu_cost) bucket; buckets must not overlap."""
    out = []
    prev_high = None
    for low, high, gpu_cost, cpu_cost in buckets:
        if prev_high is not None and low < prev_high:
            raise ConfigurationError("recommendation buckets overlap")
        prev_high = high if high is not None else float("inf")
        out.append(Recommendation(batch_low=low, batch_high=high,
                                  label=recommend(gpu_cost, cpu_cost, thresholds),
                                  gpu_cost=gpu_cost, cpu_cost=cpu_cost))
    return out
