from .metrics import (DEFAULT_RING_CAPACITY, BusyTracker, LatencyRecorder, MetricsRegistry,
                      PercentileSnapshot, nearest_rank, throughput_window)
from .alerts import AlertEngine, AlertRule, AlertTransition
from .exposition import render_exposition, sanitize_name

__all__ = [
    "LatencyRecorder", "PercentileSnapshot", "MetricsRegistry", "BusyTracker",
    "nearest_rank", "throughput_window", "DEFAULT_RING_CAPACITY",
    "AlertRule", "AlertEngine", "AlertTransition",
    "render_exposition", "sanitize_name",
]
