from .costs import (LABELS, PricingModel, Recommendation, RecommendationThresholds,
                    break_even_batch, cost_per_1k, load_pricing, recommend,
                    recommendation_table)
from .security_budget import (REFERENCE_BASELINE_MS, REFERENCE_COMPONENTS_MS,
                              REFERENCE_FULL_STACK_DELTA_MS, REFERENCE_FULL_STACK_MS,
                              ComponentTable, CompositionRow, amortized_security_latency,
                              composition_report, predicted_total)
from .coldstart import KeepWarmReport, cold_fraction, keep_warm_tradeoff

__all__ = [
    "cost_per_1k", "PricingModel", "load_pricing", "break_even_batch",
    "recommend", "recommendation_table", "Recommendation", "RecommendationThresholds", "LABELS",
    "ComponentTable", "amortized_security_latency", "predicted_total",
    "composition_report", "CompositionRow",
    "REFERENCE_BASELINE_MS", "REFERENCE_COMPONENTS_MS", "REFERENCE_FULL_STACK_MS",
    "REFERENCE_FULL_STACK_DELTA_MS",
    "cold_fraction", "keep_warm_tradeoff", "KeepWarmReport",
]
