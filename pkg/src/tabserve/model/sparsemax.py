"""Sparsemax: Euclidean projection onto the probability simplex.

Unlike softmax, the projection assigns exact zeros outside its support,
which is what makes the attention masks sparse and auditable.
"""
from __future__ import annotations

import numpy as np

from ..errors import InvalidInputError


def sparsemax(logits: np.ndarray) -> np.ndarray:
    """Project ``logits`` onto the simplex, row-wise for 2-D input.

    Accepts a 1-D vector or a 2-D (batch, n) array and returns the same
    shape. Raises :class:`InvalidInputError` on non-finite input.
    """
    z = np.asarray(logits, dtype=np.float64)
    if z.size == 0:
        raise InvalidInputError("sparsemax input must have length >= 1")
    if not np.all(np.isfinite(z)):
        raise InvalidInputError("sparsemax input must be finite")
    squeeze = z.ndim == 1
    if squeeze:
        z = z[None, :]
    if z.ndim != 2:
        raise InvalidInputError("sparsemax expects a vector or a 2-D batch")

    # Shift by the row max: mathematically a no-op (shift invariance),
    # numerically keeps cumulative sums small.
    z = z - np.max(z, axis=1, keepdims=True)
    z_sorted = np.sort(z, axis=1)[:, ::-1]
    n = z.shape[1]
    k_range = np.arange(1, n + 1, dtype=np.float64)
    cumsum = np.cumsum(z_sorted, axis=1)
    support = 1.0 + k_range * z_sorted > cumsum
    k = np.count_nonzero(support, axis=1)
    tau = (cumsum[np.arange(z.shape[0]), k - 1] - 1.0) / k
    out = np.maximum(z - tau[:, None], 0.0)
    return out[0] if squeeze else out


def sparsemax_jvp_mask(output: np.ndarray, grad: np.ndarray) -> np.ndarray:
    """Pull ``grad`` back through a sparsemax whose forward value was ``output``.

    The Jacobian restricted to the support S is diag(1) - 1/|S|; entries
    outside the support get zero gradient.
    """
    squeeze = output.ndim == 1
    m = output[None, :] if squeeze else output
    g = grad[None, :] if squeeze else grad
    on = m > 0.0
    k = np.count_nonzero(on, axis=1, keepdims=True)
    avg = np.sum(np.where(on, g, 0.0), axis=1, keepdims=True) / k
    out = np.where(on, g - avg, 0.0)
    return out[0] if squeeze else out


def project_simplex_bruteforce(z: np.ndarray) -> np.ndarray:
    """Exact simplex projection by exhaustive support enumeration.

    Independent oracle: for every candidate support S, solve the equality-
    constrained quadratic (threshold tau_S), keep KKT-feasible candidates,
    and return the one minimizing the Euclidean distance. Exponential in
    len(z); use only for small test vectors.
    """
    z = np.asarray(z, dtype=np.float64)
    n = z.size
    best = None
    best_dist = np.inf
    for mask_bits in range(1, 2**n):
        support = np.array([(mask_bits >> i) & 1 for i in range(n)], dtype=bool)
        k = support.sum()
        tau = (z[support].sum() - 1.0) / k
        cand = np.where(support, z - tau, 0.0)
        if np.any(cand < -1e-12):
            continue
        cand = np.maximum(cand, 0.0)
        dist = np.sum((cand - z) ** 2)
        if dist < best_dist - 1e-15:
            best_dist = dist
            best = cand
    return best
