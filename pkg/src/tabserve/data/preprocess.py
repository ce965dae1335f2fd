"""Fit/apply preprocessing: standardize, one-hot, ordinal map, passthrough.

A fitted plan is immutable and its application is a pure function of
(table, plan), so re-applying it is bit-identical.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidInputError
from .ingest import RawTable
from .schema import DatasetSchema


@dataclass
class FeatureMatrix:
    values: np.ndarray            # (rows, cols) float64
    column_names: list[str]

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise InvalidInputError("feature matrix must be 2-D")
        if self.values.shape[1] != len(self.column_names):
            raise InvalidInputError("column_names length must match matrix width")
        if not np.all(np.isfinite(self.values)):
            raise InvalidInputError("feature matrix must be finite")

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class ColumnTransform:
    label: str
    kind: str                     # standardize | onehot | ordinal | passthrough
    median: float = 0.0           # imputation value for numeric/passthrough
    mean: float = 0.0
    std: float = 1.0
    categories: tuple[str, ...] = ()
    mapping: tuple[tuple[str, int], ...] = ()


@dataclass
class TransformResult:
    matrix: FeatureMatrix
    labels: np.ndarray | None
    unseen_counts: dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class PreprocessPlan:
    schema_name: str
    target: str
    target_classes: tuple[str, ...]
    transforms: tuple[ColumnTransform, ...]
    fingerprint: str
    warnings: tuple[str, ...]

    def transform(self, table: RawTable) -> TransformResult:
        n = table.n_rows
        if n == 0:
            raise InvalidInputError("no rows to transform after quarantine")
        blocks: list[np.ndarray] = []
        names: list[str] = []
        unseen: dict[str, int] = {}
        for t in self.transforms:
            raw = table.columns[t.label]
            if t.kind in ("standardize", "passthrough"):
                col = np.array([t.median if v is None else float(v) for v in raw])
                if t.kind == "standardize":
                    col = (col - t.mean) / t.std
                blocks.append(col[:, None])
                names.append(t.label)
            elif t.kind == "ordinal":
                mapping = dict(t.mapping)
                vals = np.empty(n)
                misses = 0
                for i, v in enumerate(raw):
                    if v in mapping:
                        vals[i] = mapping[v]
                    else:
                        vals[i] = -1.0
                        misses += 1
                if misses:
                    unseen[t.label] = misses
                blocks.append(vals[:, None])
                names.append(t.label)
            else:  # onehot
                idx = {c: j for j, c in enumerate(t.categories)}
                block = np.zeros((n, len(t.categories)))
                misses = 0
                for i, v in enumerate(raw):
                    key = "missing" if v is None else v
                    j = idx.get(key)
                    if j is None:
                        misses += 1  # unseen level maps to the all-zeros group
                    else:
                        block[i, j] = 1.0
                if misses:
                    unseen[t.label] = misses
                blocks.append(block)
                names.extend(f"{t.label}={c}" for c in t.categories)
        matrix = FeatureMatrix(np.hstack(blocks), names)

        labels = None
        if self.target in table.columns:
            cls_index = {c: i for i, c in enumerate(self.target_classes)}
            try:
                labels = np.array([cls_index[v] for v in table.columns[self.target]],
                                  dtype=np.int64)
            except KeyError as exc:
                raise InvalidInputError(f"unknown target class {exc.args[0]!r}")
        return TransformResult(matrix=matrix, labels=labels, unseen_counts=unseen)

    def encode_labels(self, table: RawTable) -> np.ndarray:
        labels = self.transform(table).labels
        if labels is None:
            raise InvalidInputError(f"table has no target column {self.target!r}")
        return labels

    def to_dict(self) -> dict:
        return {
            "schema_name": self.schema_name,
            "target": self.target,
            "target_classes": list(self.target_classes),
            "fingerprint": self.fingerprint,
            "warnings": list(self.warnings),
            "transforms": [
                {"label": t.label, "kind": t.kind, "median": t.median,
                 "mean": t.mean, "std": t.std, "categories": list(t.categories),
                 "mapping": [list(m) for m in t.mapping]}
                for t in self.transforms],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PreprocessPlan":
        transforms = tuple(
            ColumnTransform(label=t["label"], kind=t["kind"], median=t["median"],
                            mean=t["mean"], std=t["std"],
                            categories=tuple(t["categories"]),
                            mapping=tuple((str(k), int(v)) for k, v in t["mapping"]))
            for t in d["transforms"])
        return cls(schema_name=d["schema_name"], target=d["target"],
                   target_classes=tuple(d["target_classes"]), transforms=transforms,
                   fingerprint=d["fingerprint"], warnings=tuple(d["warnings"]))


def _fingerprint(table: RawTable) -> str:
    h = hashlib.sha256()
    h.update(table.schema.name.encode())
    for label in sorted(table.columns):
        h.update(label.encode())
        for v in table.columns[label]:
            h.update(repr(v).encode())
    return h.hexdigest()[:16]


def fit_preprocess(table: RawTable, schema: DatasetSchema) -> PreprocessPlan:
    """Fit per-column transforms on an ingested table."""
    if table.n_rows == 0:
        raise InvalidInputError("cannot fit preprocessing on an empty table")
    transforms: list[ColumnTransform] = []
    warnings: list[str] = []
    for spec in schema.feature_columns:
        raw = table.columns[spec.label]
        if spec.kind in ("numeric", "timestamp"):
            present = np.array([v for v in raw if v is not None], dtype=np.float64)
            if present.size == 0:
                warnings.append(f"column {spec.label!r} excluded: all values missing")
                continue
            median = float(np.median(present))
            filled = np.array([median if v is None else float(v) for v in raw])
            if spec.kind == "timestamp":
                transforms.append(ColumnTransform(spec.label, "passthrough", median=median))
                continue
            mean = float(filled.mean())
            std = float(filled.std(ddof=1)) if filled.size > 1 else 0.0
            if std == 0.0:
                warnings.append(f"column {spec.label!r} excluded: zero variance")
                continue
            transforms.append(ColumnTransform(spec.label, "standardize",
                                              median=median, mean=mean, std=std))
        elif spec.kind == "ordinal":
            levels = sorted({v for v in raw if v is not None})
            if len(levels) < 2:
                warnings.append(f"column {spec.label!r} excluded: fewer than 2 levels")
                continue
            transforms.append(ColumnTransform(
                spec.label, "ordinal",
                mapping=tuple((lvl, i) for i, lvl in enumerate(levels))))
        else:  # categorical
            levels = sorted({v for v in raw if v is not None})
            if any(v is None for v in raw):
                levels.append("missing")
            if len(levels) < 2:
                warnings.append(f"column {spec.label!r} excluded: fewer than 2 levels")
                continue
            transforms.append(ColumnTransform(spec.label, "onehot",
                                              categories=tuple(levels)))
    target_classes = tuple(sorted({v for v in table.columns[schema.target]}))
    return PreprocessPlan(schema_name=schema.name, target=schema.target,
                          target_classes=target_classes,
                          transforms=tuple(transforms),
                          fingerprint=_fingerprint(table),
                          warnings=tuple(warnings))


def fit_transform(table: RawTable, schema: DatasetSchema
                  ) -> tuple[FeatureMatrix, PreprocessPlan]:
    plan = fit_preprocess(table, schema)
    return plan.transform(table).matrix, plan
