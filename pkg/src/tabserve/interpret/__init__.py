from .stability import FeatureStability, StabilityReport, stability_from_batches, stability_score
from .invariance import InvarianceResult, load_invariance_check

__all__ = [
    "StabilityReport", "FeatureStability", "stability_score", "stability_from_batches",
    "load_invariance_check", "InvarianceResult",
]
