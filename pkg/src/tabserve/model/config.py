"""Model hyperparameter container."""
from __future__ import annotations

from dataclasses import dataclass, field, asdict

from ..errors import ConfigurationError


@dataclass(frozen=True)
class ModelConfig:
    """Hyperparameters of the attentive tabular classifier.

    ``n_d``/``n_a`` are the decision and attention widths, ``n_steps`` the
    number of sequential decision steps, ``lambda_sparse`` the coefficient of
    the mask-entropy regularizer, and ``gamma`` the prior relaxation factor
    controlling how strongly a feature used at one step is discouraged at
    later steps (``gamma = 1`` forbids reuse of a fully-used feature).
    """

    feature_count: int
    n_classes: int = 2
    n_d: int = 8
    n_a: int = 8
    n_steps: int = 3
    lambda_sparse: float = 1e-3
    gamma: float = 1.3
    seed: int = 0

    def __post_init__(self) -> None:
        if self.feature_count < 1:
            raise ConfigurationError("feature_count must be >= 1")
        if self.n_classes < 2:
            raise ConfigurationError("n_classes must be >= 2")
        if self.n_d < 1 or self.n_a < 1:
            raise ConfigurationError("n_d and n_a must be >= 1")
        if self.n_steps < 1:
            raise ConfigurationError("n_steps must be >= 1")
        if self.lambda_sparse < 0:
            raise ConfigurationError("lambda_sparse must be >= 0")
        if self.gamma < 1.0:
            raise ConfigurationError("gamma must be >= 1")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ModelConfig":
        return cls(**d)
