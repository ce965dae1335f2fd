"""Threshold alerts with sustain-duration hysteresis."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ConfigurationError

_COMPARATORS = {
    ">": lambda v, t: v > t,
    ">=": lambda v, t: v >= t,
    "<": lambda v, t: v < t,
    "<=": lambda v, t: v <= t,
}


@dataclass(frozen=True)
class AlertRule:
    metric: str
    comparator: str
    threshold: float
    sustain_s: float

    def __post_init__(self) -> None:
        if self.comparator not in _COMPARATORS:
            raise ConfigurationError(f"unknown comparator {self.comparator!r}")
        if self.sustain_s < 0:
            raise ConfigurationError("sustain duration must be >= 0")

    def breached(self, value: float) -> bool:
        return _COMPARATORS[self.comparator](value, self.threshold)


@dataclass(frozen=True)
class AlertTransition:
    rule: AlertRule
    kind: str                # "fired" | "cleared"
    at: float
    value: float


@dataclass
class _RuleState:
    breach_since: float | None = None
    ok_since: float | None = None
    fired: bool = False


class AlertEngine:
    """Deterministic evaluation driven by explicit timestamps.

    A rule fires once its condition has held continuously for the sustain
    duration, and clears only after the condition has been absent for the
    same duration (hysteresis). Unknown metric names are rejected at
    construction when a catalog of known metrics is supplied.
    """

    def __init__(self, rules, known_metrics=None, events_path=None):
        self.rules = list(rules)
        if known_metrics is not None:
            unknown = [r.metric for r in self.rules if r.metric not in known_metrics]
            if unknown:
                raise ConfigurationError(f"alert rules reference unknown metrics: {unknown}")
        self._state = {id(r): _RuleState() for r in self.rules}
        self.events_path = Path(events_path) if events_path else None
        self.transitions: list[AlertTransition] = []

    def evaluate(self, now: float, metrics: dict) -> list[AlertTransition]:
        out: list[AlertTransition] = []
        for rule in self.rules:
            if rule.metric not in metrics:
                continue
            value = metrics[rule.metric]
            state = self._state[id(rule)]
            if rule.breached(value):
                state.ok_since = None
                if state.breach_since is None:
                    state.breach_since = now
                if not state.fired and now - state.breach_since >= rule.sustain_s:
                    state.fired = True
                    out.append(AlertTransition(rule, "fired", now, value))
            else:
                state.breach_since = None
                if state.ok_since is None:
                    state.ok_since = now
                if state.fired and now - state.ok_since >= rule.sustain_s:
                    state.fired = False
                    out.append(AlertTransition(rule, "cleared", now, value))
        self.transitions.extend(out)
        if self.events_path and out:
            with open(self.events_path, "a", encoding="utf-8") as fh:
                for t in out:
                    fh.write(json.dumps({"metric": t.rule.metric, "kind": t.kind,
                                         "at": t.at, "value": t.value,
                                         "threshold": t.rule.threshold}) + "\n")
        return out

    def is_fired(self, rule: AlertRule) -> bool:
        return self._state[id(rule)].fired
