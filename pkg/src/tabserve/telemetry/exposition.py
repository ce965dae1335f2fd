"""Line-oriented text exposition of all registered metrics."""
from __future__ import annotations

import re

from .metrics import MetricsRegistry

_NAME_OK = re.compile(r"[^a-zA-Z0-9_:]")


def sanitize_name(name: str) -> str:
    return _NAME_OK.sub("_", name)


def _format_value(v: float) -> str:
    if float(v).is_integer():
        return str(int(v))
    return repr(float(v))


def render_exposition(registry: MetricsRegistry) -> str:
    """``# TYPE name kind`` headers followed by ``name{label="v"} value`` samples."""
    lines: list[str] = []
    for name, value in sorted(registry.counters().items()):
        metric = sanitize_name(name)
        lines.append(f"# TYPE {metric} counter")
        lines.append(f"{metric} {_format_value(value)}")
    for name, value in sorted(registry.gauges().items()):
        metric = sanitize_name(name)
        lines.append(f"# TYPE {metric} gauge")
        lines.append(f"{metric} {_format_value(value)}")
    stages = registry.latency.stages()
    if stages:
        lines.append("# TYPE inference_latency_ms gauge")
        for stage in stages:
            snap = registry.latency.snapshot(stage)
            if snap is None:
                continue
            for q, v in (("p50", snap.p50), ("p95", snap.p95), ("p99", snap.p99)):
                lines.append(
                    f'inference_latency_ms{{stage="{sanitize_name(stage)}",quantile="{q}"}}'
                    f" {_format_value(v)}")
        lines.append("# TYPE inference_latency_samples gauge")
        for stage in stages:
            snap = registry.latency.snapshot(stage)
            if snap is not None:
                lines.append(
                    f'inference_latency_samples{{stage="{sanitize_name(stage)}"}} {snap.count}')
    return "\n".join(lines) + "\n"
