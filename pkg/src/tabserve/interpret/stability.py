"""Feature-importance stability across batch partitions.

Per-feature stability is the coefficient-of-variation form
``max(0, 1 - sigma_f / mu_f)`` over per-batch mean importances, bounded in
[0, 1]. The global rank variance is normalized by (F^2 - 1) / 12, the
variance of a uniformly random rank, so the score is scale-free in the
number of features.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidInputError
from ..model.network import TabNetModel


@dataclass(frozen=True)
class FeatureStability:
    name: str
    mean_importance: float
    stability: float


@dataclass(frozen=True)
class StabilityReport:
    features: tuple[FeatureStability, ...]   # sorted by mean importance, descending
    rank_variance: float
    sample_count: int
    partition_count: int
    load_mode: str

    def top(self, k: int) -> tuple[FeatureStability, ...]:
        return self.features[:k]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["feature", "importance", "stability"])
        for f in self.features:
            writer.writerow([f.name, f"{f.mean_importance:.6f}", f"{f.stability:.6f}"])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({
            "score": "per-feature max(0, 1 - sd/mean) over partition means; "
                     "rank variance normalized by (F^2-1)/12",
            "sample_count": self.sample_count,
            "partition_count": self.partition_count,
            "load_mode": self.load_mode,
            "rank_variance": self.rank_variance,
            "features": [{"name": f.name, "importance": f.mean_importance,
                          "stability": f.stability} for f in self.features],
        }, indent=2)


def stability_from_batches(batch_importances: np.ndarray,
                           feature_names=None, *, sample_count: int = 0,
                           load_mode: str = "offline") -> StabilityReport:
    """Score a (partitions, features) matrix of per-batch mean importances."""
    bi = np.asarray(batch_importances, dtype=np.float64)
    if bi.ndim != 2 or bi.shape[0] < 2:
        raise InvalidInputError("need a (partitions >= 2, features) matrix")
    b, f = bi.shape
    names = list(feature_names) if feature_names is not None else [f"f{i}" for i in range(f)]
    mu = bi.mean(axis=0)
    sd = bi.std(axis=0, ddof=1)
    stability = np.empty(f)
    for j in range(f):
        if mu[j] == 0.0:
            stability[j] = 1.0 if np.all(bi[:, j] == 0.0) else 0.0
        else:
            stability[j] = max(0.0, 1.0 - sd[j] / mu[j])

    # per-partition dense ranks (0 = most important); ties broken by index,
    # identically in every partition, so tied features contribute no variance
    ranks = np.empty((b, f))
    for i in range(b):
        order = np.argsort(-bi[i], kind="stable")
        ranks[i, order] = np.arange(f)
    rank_var = ranks.var(axis=0, ddof=0).mean() / ((f * f - 1) / 12.0)

    rows = sorted((FeatureStability(names[j], float(mu[j]), float(stability[j]))
                   for j in range(f)),
                  key=lambda r: -r.mean_importance)
    return StabilityReport(features=tuple(rows), rank_variance=float(rank_var),
                           sample_count=sample_count, partition_count=b,
                           load_mode=load_mode)


def stability_score(model: TabNetModel, samples, partitions: int,
                    feature_names=None, *, load_mode: str = "offline") -> StabilityReport:
    """Split samples into ``partitions`` equal batches and score the
    per-batch aggregate importances."""
    x = np.asarray(getattr(samples, "values", samples), dtype=np.float64)
    names = feature_names or list(getattr(samples, "column_names",
                                          [f"f{i}" for i in range(x.shape[1])]))
    if partitions < 2 or x.shape[0] < partitions:
        raise InvalidInputError("need rows >= partitions >= 2")
    per = x.shape[0] // partitions
    batch_means = np.empty((partitions, x.shape[1]))
    for b in range(partitions):
        chunk = x[b * per:(b + 1) * per]
        batch_means[b] = model.apply(chunk).importance.mean(axis=0)
    return stability_from_batches(batch_means, names,
                                  sample_count=per * partitions, load_mode=load_mode)
