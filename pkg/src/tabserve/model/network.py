"""Attentive tabular classifier: sequential decision steps with sparse feature masks.

Architecture, per decision step: an attentive transformer turns the previous
step's attention state into per-feature scores, multiplied by a running prior
and projected through sparsemax into a mask on the simplex; masked features go
through a feature transformer (two shared + two step-specific gated blocks)
whose output splits into a decision part (ReLU, summed into the output head)
and the next attention state. The prior relaxation ``gamma`` discounts features
already used by earlier steps.

All tensor contractions go through ``np.einsum`` rather than BLAS matmul on
purpose: einsum's per-row accumulation order does not depend on the batch
size, which is what makes per-sample outputs bitwise invariant to batch
composition (a contract the serving and interpretability layers rely on).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError, InvalidInputError
from .config import ModelConfig
from .sparsemax import sparsemax, sparsemax_jvp_mask

_NORM_EPS = 1e-8
_ENT_EPS = 1e-15
_RESIDUAL_SCALE = math.sqrt(0.5)


@dataclass
class Explanation:
    """Per-step feature masks and their aggregate for one sample."""

    step_masks: np.ndarray        # (n_steps, feature_count), rows on the simplex
    aggregate_importance: np.ndarray  # (feature_count,), sums to 1


@dataclass
class PredictionOutput:
    probabilities: np.ndarray     # (n_classes,), sums to 1
    predicted_class: int
    explanation: Explanation


@dataclass
class ForwardResult:
    """Batched forward outputs plus the caches needed for backprop."""

    logits: np.ndarray            # (B, C)
    probabilities: np.ndarray     # (B, C)
    masks: np.ndarray             # (n_steps, B, F)
    importance: np.ndarray        # (B, F)
    caches: dict = field(default_factory=dict)


def _glu(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    h = u.shape[1] // 2
    sig = 1.0 / (1.0 + np.exp(-u[:, h:]))
    return u[:, :h] * sig, sig


def _glu_backward(u: np.ndarray, sig: np.ndarray, dout: np.ndarray) -> np.ndarray:
    h = u.shape[1] // 2
    dlin = dout * sig
    dgate = dout * u[:, :h] * sig * (1.0 - sig)
    return np.concatenate([dlin, dgate], axis=1)


def init_parameters(config: ModelConfig) -> dict[str, np.ndarray]:
    """Seeded uniform fan-in initialization; biases start at zero."""
    rng = np.random.default_rng(config.seed)
    h = config.n_d + config.n_a
    f = config.feature_count

    def uniform(fan_in: int, shape: tuple[int, ...]) -> np.ndarray:
        bound = 1.0 / math.sqrt(fan_in)
        return rng.uniform(-bound, bound, size=shape)

    params: dict[str, np.ndarray] = {
        "shared1_W": uniform(f, (f, 2 * h)),
        "shared1_b": np.zeros(2 * h),
        "shared2_W": uniform(h, (h, 2 * h)),
        "shared2_b": np.zeros(2 * h),
        "head_W": uniform(config.n_d, (config.n_d, config.n_classes)),
        "head_b": np.zeros(config.n_classes),
    }
    for s in range(config.n_steps + 1):
        params[f"step{s}_fc1_W"] = uniform(h, (h, 2 * h))
        params[f"step{s}_fc1_b"] = np.zeros(2 * h)
        params[f"step{s}_fc2_W"] = uniform(h, (h, 2 * h))
        params[f"step{s}_fc2_b"] = np.zeros(2 * h)
    for s in range(1, config.n_steps + 1):
        params[f"step{s}_att_W"] = uniform(config.n_a, (config.n_a, f))
        params[f"step{s}_att_b"] = np.zeros(f)
    return params


@dataclass
class TabNetModel:
    """Trained model bundle: config, parameters, frozen normalization stats."""

    config: ModelConfig
    params: dict[str, np.ndarray]
    norm_mean: np.ndarray         # (F,)
    norm_var: np.ndarray          # (F,), entries > 0
    model_version: str

    def __post_init__(self) -> None:
        if not self.model_version:
            raise ConfigurationError("model_version must be non-empty")
        if np.any(self.norm_var <= 0):
            raise ConfigurationError("normalization variances must be > 0")

    # -- normalization -------------------------------------------------

    def normalize(self, x: np.ndarray) -> np.ndarray:
        """Apply the frozen per-feature statistics (inference path)."""
        return (x - self.norm_mean) / np.sqrt(self.norm_var + _NORM_EPS)

    # -- building blocks -----------------------------------------------

    def _transform(self, x: np.ndarray, step: int, cache: dict | None = None) -> np.ndarray:
        """Feature transformer: shared1 -> shared2 -> step fc1 -> step fc2."""
        p = self.params
        u1 = np.einsum("bf,fk->bk", x, p["shared1_W"]) + p["shared1_b"]
        g1, s1 = _glu(u1)
        u2 = np.einsum("bh,hk->bk", g1, p["shared2_W"]) + p["shared2_b"]
        glu2, s2 = _glu(u2)
        g2 = (glu2 + g1) * _RESIDUAL_SCALE
        u3 = np.einsum("bh,hk->bk", g2, p[f"step{step}_fc1_W"]) + p[f"step{step}_fc1_b"]
        glu3, s3 = _glu(u3)
        g3 = (glu3 + g2) * _RESIDUAL_SCALE
        u4 = np.einsum("bh,hk->bk", g3, p[f"step{step}_fc2_W"]) + p[f"step{step}_fc2_b"]
        glu4, s4 = _glu(u4)
        g4 = (glu4 + g3) * _RESIDUAL_SCALE
        if cache is not None:
            cache.update(x=x, u1=u1, s1=s1, g1=g1, u2=u2, s2=s2, g2=g2,
                         u3=u3, s3=s3, g3=g3, u4=u4, s4=s4)
        return g4

    def _transform_backward(self, step: int, dout: np.ndarray, cache: dict,
                            grads: dict[str, np.ndarray]) -> np.ndarray:
        p = self.params
        r = _RESIDUAL_SCALE
        dg3 = dout * r
        du4 = _glu_backward(cache["u4"], cache["s4"], dout * r)
        grads[f"step{step}_fc2_W"] += np.einsum("bh,bk->hk", cache["g3"], du4)
        grads[f"step{step}_fc2_b"] += du4.sum(axis=0)
        dg3 = dg3 + np.einsum("bk,hk->bh", du4, p[f"step{step}_fc2_W"])

        dg2 = dg3 * r
        du3 = _glu_backward(cache["u3"], cache["s3"], dg3 * r)
        grads[f"step{step}_fc1_W"] += np.einsum("bh,bk->hk", cache["g2"], du3)
        grads[f"step{step}_fc1_b"] += du3.sum(axis=0)
        dg2 = dg2 + np.einsum("bk,hk->bh", du3, p[f"step{step}_fc1_W"])

        dg1 = dg2 * r
        du2 = _glu_backward(cache["u2"], cache["s2"], dg2 * r)
        grads["shared2_W"] += np.einsum("bh,bk->hk", cache["g1"], du2)
        grads["shared2_b"] += du2.sum(axis=0)
        dg1 = dg1 + np.einsum("bk,hk->bh", du2, p["shared2_W"])

        du1 = _glu_backward(cache["u1"], cache["s1"], dg1)
        grads["shared1_W"] += np.einsum("bf,bk->fk", cache["x"], du1)
        grads["shared1_b"] += du1.sum(axis=0)
        return np.einsum("bk,fk->bf", du1, p["shared1_W"])

    def attentive_step(self, state: np.ndarray, prior: np.ndarray,
                       step_index: int) -> tuple[np.ndarray, np.ndarray]:
        """One attention step: mask = sparsemax(prior * scores(state)).

        Returns the mask and the updated prior ``prior * (gamma - mask)``.
        """
        cfg = self.config
        state = np.atleast_2d(np.asarray(state, dtype=np.float64))
        prior = np.atleast_2d(np.asarray(prior, dtype=np.float64))
        if not 1 <= step_index <= cfg.n_steps:
            raise ConfigurationError(f"step_index {step_index} outside 1..{cfg.n_steps}")
        if state.shape[1] != cfg.n_a:
            raise ConfigurationError(
                f"attention state width {state.shape[1]} != n_a {cfg.n_a}")
        if prior.shape[1] != cfg.feature_count:
            raise ConfigurationError(
                f"prior width {prior.shape[1]} != feature_count {cfg.feature_count}")
        att = (np.einsum("ba,af->bf", state, self.params[f"step{step_index}_att_W"])
               + self.params[f"step{step_index}_att_b"])
        mask = sparsemax(prior * att)
        new_prior = prior * (cfg.gamma - mask)
        return mask, new_prior

    # -- full forward ----------------------------------------------------

    def apply(self, x: np.ndarray, *, normalized: bool = False,
              use_batch_stats: bool = False, with_caches: bool = False) -> ForwardResult:
        """Run the batch through all decision steps.

        ``use_batch_stats`` replaces the frozen statistics with statistics of
        the given batch; it exists as a negative control for the batch-
        invariance checks and must stay off in production paths.
        """
        cfg = self.config
        x = np.asarray(x, dtype=np.float64)
        if x.ndim == 1:
            x = x[None, :]
        if x.shape[1] != cfg.feature_count:
            raise InvalidInputError(
                f"batch width {x.shape[1]} != feature_count {cfg.feature_count}")
        if not np.all(np.isfinite(x)):
            raise InvalidInputError("features must be finite")
        if not normalized:
            if use_batch_stats:
                mean = x.mean(axis=0)
                var = x.var(axis=0)
                xn = (x - mean) / np.sqrt(var + _NORM_EPS)
            else:
                xn = self.normalize(x)
        else:
            xn = x

        b = xn.shape[0]
        p = self.params
        steps: list[dict] = []
        cache0: dict = {}
        f0 = self._transform(xn, 0, cache0 if with_caches else None)
        a = f0[:, cfg.n_d:]
        prior = np.ones((b, cfg.feature_count))
        d_sum = np.zeros((b, cfg.n_d))
        agg = np.zeros((b, cfg.feature_count))
        masks = np.empty((cfg.n_steps, b, cfg.feature_count))
        for s in range(1, cfg.n_steps + 1):
            att = (np.einsum("ba,af->bf", a, p[f"step{s}_att_W"])
                   + p[f"step{s}_att_b"])
            z = prior * att
            m = sparsemax(z)
            new_prior = prior * (cfg.gamma - m)
            xm = m * xn
            tcache: dict = {}
            f = self._transform(xm, s, tcache if with_caches else None)
            d_pre = f[:, :cfg.n_d]
            d = np.maximum(d_pre, 0.0)
            d_sum = d_sum + d
            eta = d.sum(axis=1)
            agg = agg + eta[:, None] * m
            masks[s - 1] = m
            if with_caches:
                steps.append(dict(att=att, m=m, prior_in=prior, a_in=a,
                                  d_pre=d_pre, transform=tcache))
            a = f[:, cfg.n_d:]
            prior = new_prior

        logits = np.einsum("bd,dc->bc", d_sum, p["head_W"]) + p["head_b"]
        shifted = logits - logits.max(axis=1, keepdims=True)
        expv = np.exp(shifted)
        probs = expv / expv.sum(axis=1, keepdims=True)

        totals = agg.sum(axis=1, keepdims=True)
        fallback = masks.mean(axis=0)  # rows sum to 1 when all eta were zero
        importance = np.where(totals > 0.0, agg / np.where(totals > 0.0, totals, 1.0),
                              fallback)

        caches = {}
        if with_caches:
            caches = dict(xn=xn, cache0=cache0, steps=steps, d_sum=d_sum, probs=probs)
        return ForwardResult(logits=logits, probabilities=probs, masks=masks,
                             importance=importance, caches=caches)

    def forward(self, batch) -> list[PredictionOutput]:
        """Per-sample prediction outputs for a batch (FeatureMatrix or array)."""
        values = getattr(batch, "values", batch)
        result = self.apply(values)
        outputs = []
        for i in range(result.probabilities.shape[0]):
            expl = Explanation(step_masks=result.masks[:, i, :].copy(),
                               aggregate_importance=result.importance[i].copy())
            probs = result.probabilities[i]
            outputs.append(PredictionOutput(probabilities=probs,
                                            predicted_class=int(np.argmax(probs)),
                                            explanation=expl))
        return outputs

    # -- loss and gradients ----------------------------------------------

    def loss_and_grads(self, xn: np.ndarray, y: np.ndarray
                       ) -> tuple[float, dict[str, np.ndarray], ForwardResult]:
        """Cross-entropy plus mask-entropy regularizer, with analytic gradients.

        ``xn`` must already be normalized (the training loop owns batch
        statistics); gradients cover every parameter tensor.
        """
        cfg = self.config
        res = self.apply(xn, normalized=True, with_caches=True)
        b = xn.shape[0]
        logits = res.logits
        logp = logits - logits.max(axis=1, keepdims=True)
        logp = logp - np.log(np.exp(logp).sum(axis=1, keepdims=True))
        ce = -logp[np.arange(b), y].mean()
        ent = -(res.masks * np.log(res.masks + _ENT_EPS)).sum(axis=2)
        sparse_term = ent.mean()
        loss = ce + cfg.lambda_sparse * sparse_term

        grads = {k: np.zeros_like(v) for k, v in self.params.items()}
        probs = res.caches["probs"]
        dlogits = probs.copy()
        dlogits[np.arange(b), y] -= 1.0
        dlogits /= b
        grads["head_W"] += np.einsum("bd,bc->dc", res.caches["d_sum"], dlogits)
        grads["head_b"] += dlogits.sum(axis=0)
        dd_sum = np.einsum("bc,dc->bd", dlogits, self.params["head_W"])

        xn_arr = res.caches["xn"]
        ent_coef = cfg.lambda_sparse / (cfg.n_steps * b)
        da = np.zeros((b, cfg.n_a))
        dprior_after = np.zeros((b, cfg.feature_count))
        for s in range(cfg.n_steps, 0, -1):
            st = res.caches["steps"][s - 1]
            m = st["m"]
            dd = dd_sum * (st["d_pre"] > 0.0)
            df = np.concatenate([dd, da], axis=1)
            dxm = self._transform_backward(s, df, st["transform"], grads)
            dm = dxm * xn_arr
            dm += ent_coef * (-(np.log(m + _ENT_EPS) + m / (m + _ENT_EPS)))
            dm += dprior_after * (-st["prior_in"])
            dprior_prev = dprior_after * (cfg.gamma - m)
            dz = sparsemax_jvp_mask(m, dm)
            datt = dz * st["prior_in"]
            dprior_prev += dz * st["att"]
            grads[f"step{s}_att_W"] += np.einsum("ba,bf->af", st["a_in"], datt)
            grads[f"step{s}_att_b"] += datt.sum(axis=0)
            da = np.einsum("bf,af->ba", datt, self.params[f"step{s}_att_W"])
            dprior_after = dprior_prev

        df0 = np.concatenate([np.zeros((b, cfg.n_d)), da], axis=1)
        self._transform_backward(0, df0, res.caches["cache0"], grads)
        return loss, grads, res

    def copy(self) -> "TabNetModel":
        return TabNetModel(config=self.config,
                           params={k: v.copy() for k, v in self.params.items()},
                           norm_mean=self.norm_mean.copy(),
                           norm_var=self.norm_var.copy(),
                           model_version=self.model_version)
