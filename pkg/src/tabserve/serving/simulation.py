"""Discrete-event arrival simulation for cold-start economics.

A request is cold when the gap since the previous arrival exceeds the idle
timeout (the function scaled to zero in between). Under Poisson arrivals
the cold fraction converges to exp(-rate * timeout); the burst pattern is
provided for sensitivity reporting.
"""
from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError


def simulate_cold_fraction(arrival_rate: float, idle_timeout_s: float,
                           n_arrivals: int = 100_000, seed: int = 0,
                           pattern: str = "poisson",
                           burst_on_s: float = 10.0, burst_off_s: float = 60.0) -> float:
    """Fraction of arrivals that find the function scaled to zero."""
    if arrival_rate <= 0:
        raise ConfigurationError("arrival rate must be > 0")
    if idle_timeout_s < 0:
        raise ConfigurationError("idle timeout must be >= 0")
    rng = np.random.default_rng(seed)
    if pattern == "poisson":
        gaps = rng.exponential(1.0 / arrival_rate, size=n_arrivals)
    elif pattern == "burst":
        # on/off source: exponential gaps while on, plus off-period pauses
        gaps_list: list[float] = []
        while len(gaps_list) < n_arrivals:
            window_end = rng.exponential(burst_on_s)
            t = 0.0
            first = True
            while True:
                gap = rng.exponential(1.0 / arrival_rate)
                if t + gap > window_end:
                    break
                t += gap
                gaps_list.append(gap + (rng.exponential(burst_off_s) if first else 0.0))
                first = False
        gaps = np.array(gaps_list[:n_arrivals])
    else:
        raise ConfigurationError(f"unknown arrival pattern {pattern!r}")
    gaps[0] = np.inf  # the very first request always pays the cold start
    return float(np.mean(gaps > idle_timeout_s))
