"""Seeded training loop: SGD with momentum, step decay, early stopping."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from ..errors import TrainingError
from .config import ModelConfig
from .network import TabNetModel, init_parameters

_STAT_EPS = 1e-8


@dataclass(frozen=True)
class TrainingSchedule:
    epochs: int = 200
    batch_size: int = 256
    learning_rate: float = 0.05
    momentum: float = 0.9
    decay_every: int = 60
    decay_factor: float = 0.5
    patience: int = 30
    validation_fraction: float = 0.2
    ghost_batch: int = 128
    stats_momentum: float = 0.02


@dataclass
class TrainingHistory:
    train_loss: list[float]
    val_loss: list[float]
    stopped_epoch: int
    initial_loss: float
    final_loss: float


def _ghost_chunks(n: int, size: int) -> list[slice]:
    """Contiguous chunks of at most ``size``; a trailing singleton is folded back."""
    if n <= size:
        return [slice(0, n)]
    bounds = list(range(0, n, size)) + [n]
    if bounds[-1] - bounds[-2] == 1:
        bounds.pop(-2)
    return [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:])]


def _normalize_ghost(x: np.ndarray, ghost: int, mean: np.ndarray, var: np.ndarray,
                     alpha: float) -> np.ndarray:
    """Normalize each ghost chunk by its own statistics; EMA-update running stats."""
    out = np.empty_like(x)
    for sl in _ghost_chunks(x.shape[0], ghost):
        chunk = x[sl]
        m = chunk.mean(axis=0)
        v = chunk.var(axis=0)
        out[sl] = (chunk - m) / np.sqrt(v + _STAT_EPS)
        mean *= 1.0 - alpha
        mean += alpha * m
        var *= 1.0 - alpha
        var += alpha * np.maximum(v, _STAT_EPS)
    return out


def default_model_version(config: ModelConfig, schedule: TrainingSchedule) -> str:
    payload = json.dumps([config.to_dict(), schedule.__dict__], sort_keys=True)
    return "tabnet-" + hashlib.sha256(payload.encode()).hexdigest()[:10]


def train(config: ModelConfig, data, labels, schedule: TrainingSchedule | None = None,
          model_version: str | None = None) -> TabNetModel:
    """Fit a model on ``data`` (FeatureMatrix or array) and integer labels.

    Training is fully seeded by ``config.seed``. Raises
    :class:`TrainingError` on degenerate inputs: label/row mismatch, a single
    class, or zero-variance feature columns (name them in the diagnostic).
    """
    schedule = schedule or TrainingSchedule()
    x = np.asarray(getattr(data, "values", data), dtype=np.float64)
    names = list(getattr(data, "column_names", [f"f{i}" for i in range(x.shape[1])]))
    y = np.asarray(labels, dtype=np.int64)
    if y.shape[0] != x.shape[0]:
        raise TrainingError(f"labels length {y.shape[0]} != rows {x.shape[0]}")
    classes = np.unique(y)
    if classes.size < 2:
        raise TrainingError("training data contains a single class")
    if classes.min() < 0 or classes.max() >= config.n_classes:
        raise TrainingError(
            f"labels outside 0..{config.n_classes - 1}: found {classes.min()}..{classes.max()}")
    col_var = x.var(axis=0)
    dead = [names[i] for i in np.nonzero(col_var == 0.0)[0]]
    if dead:
        raise TrainingError(f"zero-variance feature columns after preprocessing: {dead}")

    rng = np.random.default_rng(config.seed)
    n = x.shape[0]
    order = rng.permutation(n)
    n_val = max(1, int(round(n * schedule.validation_fraction)))
    val_idx, train_idx = order[:n_val], order[n_val:]
    if np.unique(y[train_idx]).size < 2:
        raise TrainingError("training split is single-class; provide more data")
    x_train, y_train = x[train_idx], y[train_idx]
    x_val, y_val = x[val_idx], y[val_idx]

    model = TabNetModel(
        config=config,
        params=init_parameters(config),
        norm_mean=x_train.mean(axis=0),
        norm_var=np.maximum(x_train.var(axis=0), _STAT_EPS),
        model_version=model_version or default_model_version(config, schedule),
    )

    def val_ce() -> float:
        res = model.apply(x_val)
        logits = res.logits
        logp = logits - logits.max(axis=1, keepdims=True)
        logp = logp - np.log(np.exp(logp).sum(axis=1, keepdims=True))
        return float(-logp[np.arange(x_val.shape[0]), y_val].mean())

    xn0 = model.normalize(x_train)
    initial_loss, _, _ = model.loss_and_grads(xn0, y_train)

    velocity = {k: np.zeros_like(v) for k, v in model.params.items()}
    lr = schedule.learning_rate
    best_val = np.inf
    best_state = None
    bad_epochs = 0
    history = TrainingHistory(train_loss=[], val_loss=[], stopped_epoch=0,
                              initial_loss=float(initial_loss), final_loss=0.0)

    for epoch in range(schedule.epochs):
        if epoch > 0 and schedule.decay_every > 0 and epoch % schedule.decay_every == 0:
            lr *= schedule.decay_factor
        perm = rng.permutation(x_train.shape[0])
        epoch_loss = 0.0
        n_batches = 0
        for start in range(0, x_train.shape[0], schedule.batch_size):
            idx = perm[start:start + schedule.batch_size]
            xb = x_train[idx]
            xn = _normalize_ghost(xb, schedule.ghost_batch, model.norm_mean,
                                  model.norm_var, schedule.stats_momentum)
            loss, grads, _ = model.loss_and_grads(xn, y_train[idx])
            epoch_loss += loss
            n_batches += 1
            for k, g in grads.items():
                velocity[k] = schedule.momentum * velocity[k] - lr * g
                model.params[k] += velocity[k]
        history.train_loss.append(epoch_loss / max(n_batches, 1))

        v = val_ce()
        history.val_loss.append(v)
        if v < best_val - 1e-6:
            best_val = v
            best_state = (
                {k: p.copy() for k, p in model.params.items()},
                model.norm_mean.copy(), model.norm_var.copy(),
            )
            bad_epochs = 0
        else:
            bad_epochs += 1
            if bad_epochs >= schedule.patience:
                history.stopped_epoch = epoch + 1
                break
    else:
        history.stopped_epoch = schedule.epochs

    if best_state is not None:
        model.params, model.norm_mean, model.norm_var = best_state

    final_loss, _, _ = model.loss_and_grads(model.normalize(x_train), y_train)
    history.final_loss = float(final_loss)
    model.training_history = history  # attached for inspection, not serialized
    return model


def accuracy(model: TabNetModel, x, y) -> float:
    res = model.apply(np.asarray(getattr(x, "values", x), dtype=np.float64))
    pred = np.argmax(res.probabilities, axis=1)
    return float((pred == np.asarray(y)).mean())


def roc_auc(model: TabNetModel, x, y) -> float:
    """Binary AUC via the rank statistic (ties get midranks)."""
    res = model.apply(np.asarray(getattr(x, "values", x), dtype=np.float64))
    scores = res.probabilities[:, 1]
    y = np.asarray(y)
    pos = scores[y == 1]
    neg = scores[y == 0]
    if pos.size == 0 or neg.size == 0:
        raise TrainingError("AUC needs both classes present")
    order = np.argsort(np.concatenate([pos, neg]), kind="mergesort")
    ranks = np.empty(order.size, dtype=np.float64)
    ranks[order] = np.arange(1, order.size + 1)
    # midranks for ties
    allv = np.concatenate([pos, neg])
    for v in np.unique(allv):
        tied = allv == v
        if tied.sum() > 1:
            ranks[tied] = ranks[tied].mean()
    r_pos = ranks[:pos.size].sum()
    return float((r_pos - pos.size * (pos.size + 1) / 2) / (pos.size * neg.size))
