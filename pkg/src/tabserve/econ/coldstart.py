"""Analytic cold-start economics under Poisson arrivals with scale-to-zero."""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import InvalidInputError


def cold_fraction(arrival_rate: float, idle_timeout_s: float) -> float:
    """P(inter-arrival gap > idle timeout) = exp(-rate * timeout)."""
    if arrival_rate <= 0:
        raise InvalidInputError("arrival rate must be > 0")
    if idle_timeout_s < 0:
        raise InvalidInputError("idle timeout must be >= 0")
    return math.exp(-arrival_rate * idle_timeout_s)


@dataclass(frozen=True)
class KeepWarmReport:
    cold_fraction: float
    cold_events_per_hour: float
    delay_avoided_s_per_hour: float
    keep_warm_cost_per_hour: float
    sla_budget: float
    recommend_keep_warm: bool


def keep_warm_tradeoff(arrival_rate: float, idle_timeout_s: float,
                       keep_warm_price_per_hour: float, cold_penalty_s: float,
                       sla_budget: float = 0.05) -> KeepWarmReport:
    """Compare cold delays avoided per hour against the keep-warm spend.

    Keep-warm is recommended when the cold fraction exceeds the SLA budget;
    a zero cold fraction or a budget of 1 therefore never triggers it.
    """
    if min(arrival_rate, keep_warm_price_per_hour, cold_penalty_s, sla_budget) < 0:
        raise InvalidInputError("all keep-warm inputs must be >= 0")
    frac = cold_fraction(arrival_rate, idle_timeout_s) if arrival_rate > 0 else 1.0
    cold_per_hour = arrival_rate * 3600.0 * frac
    return KeepWarmReport(
        cold_fraction=frac,
        cold_events_per_hour=cold_per_hour,
        delay_avoided_s_per_hour=cold_per_hour * cold_penalty_s,
        keep_warm_cost_per_hour=keep_warm_price_per_hour,
        sla_budget=sla_budget,
        recommend_keep_warm=frac > sla_budget,
    )
