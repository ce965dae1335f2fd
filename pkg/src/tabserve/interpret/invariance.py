"""Bitwise load-invariance check for explanations.

The strong form of the stability-under-load claim: identical inputs must
produce bit-identical masks and importances regardless of concurrency and
of which other samples share the inference batch.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..model.network import TabNetModel


@dataclass(frozen=True)
class InvarianceResult:
    passed: bool
    first_diff: tuple[int, int] | None = None   # (sample, feature)
    detail: str = ""


def _explanations(model: TabNetModel, x: np.ndarray, batch_size: int,
                  concurrency: int, use_batch_stats: bool) -> tuple[np.ndarray, np.ndarray]:
    """(masks, importance) for all rows, computed in `batch_size` chunks
    across `concurrency` worker threads."""
    chunks = [(i, x[i:i + batch_size]) for i in range(0, x.shape[0], batch_size)]
    masks = np.empty((model.config.n_steps, x.shape[0], x.shape[1]))
    importance = np.empty((x.shape[0], x.shape[1]))

    def run(item):
        start, chunk = item
        res = model.apply(chunk, use_batch_stats=use_batch_stats)
        return start, chunk.shape[0], res

    if concurrency <= 1:
        results = [run(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=concurrency) as pool:
            results = list(pool.map(run, chunks))
    for start, n, res in results:
        masks[:, start:start + n, :] = res.masks
        importance[start:start + n, :] = res.importance
    return masks, importance


def _first_diff(a: np.ndarray, b: np.ndarray) -> tuple[int, int]:
    diff = a != b
    while diff.ndim > 2:
        diff = diff.any(axis=0)
    idx = np.argwhere(diff)
    return int(idx[0][0]), int(idx[0][1])


def load_invariance_check(model: TabNetModel, samples, *,
                          concurrency: tuple[int, int] = (1, 32),
                          batch_sizes: tuple[int, int] = (1, 256),
                          use_batch_stats: bool = False) -> InvarianceResult:
    """Compare explanations across concurrency levels and batch compositions.

    ``use_batch_stats`` is the negative control: it deliberately unfreezes
    the normalization so the check must fail, proving it can detect a
    batch-dependent model.
    """
    x = np.asarray(getattr(samples, "values", samples), dtype=np.float64)
    base_masks, base_imp = _explanations(model, x, batch_sizes[0], concurrency[0],
                                         use_batch_stats)
    for conc in set(concurrency):
        for bs in set(batch_sizes):
            masks, imp = _explanations(model, x, bs, conc, use_batch_stats)
            if not np.array_equal(masks, base_masks):
                s, f = _first_diff(masks, base_masks)
                return InvarianceResult(False, (s, f),
                                        f"mask diff at sample {s}, feature {f} "
                                        f"(batch={bs}, concurrency={conc})")
            if not np.array_equal(imp, base_imp):
                s, f = _first_diff(imp, base_imp)
                return InvarianceResult(False, (s, f),
                                        f"importance diff at sample {s}, feature {f} "
                                        f"(batch={bs}, concurrency={conc})")
    return InvarianceResult(True)
