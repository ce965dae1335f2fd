"""PII redaction rules applied to audit payloads before hashing.

Redaction is idempotent: strings that already carry a redaction marker are
left untouched by every policy, so redact(redact(x)) == redact(x).
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from fnmatch import fnmatch

from ..errors import ConfigurationError

MASK = "[REDACTED]"
HASH_PREFIX = "redacted:sha256:"

VALUE_PATTERNS = {
    "email": re.compile(r"[\w.+-]+@[\w-]+\.[\w.-]+"),
    "ssn": re.compile(r"\b\d{3}-\d{2}-\d{4}\b"),
    "phone": re.compile(r"\b(?:\+?1[-. ]?)?\(?\d{3}\)?[-. ]?\d{3}[-. ]?\d{4}\b"),
}
POLICIES = ("mask", "hash", "drop")


@dataclass(frozen=True)
class RedactionRule:
    policy: str
    field_pattern: str | None = None    # fnmatch over the field name
    value_kind: str | None = None       # one of VALUE_PATTERNS

    def __post_init__(self) -> None:
        if self.policy not in POLICIES:
            raise ConfigurationError(f"unknown policy {self.policy!r}")
        if (self.field_pattern is None) == (self.value_kind is None):
            raise ConfigurationError("rule needs exactly one of field_pattern / value_kind")
        if self.value_kind is not None and self.value_kind not in VALUE_PATTERNS:
            raise ConfigurationError(f"unknown value kind {self.value_kind!r}")


DEFAULT_RULES = (
    RedactionRule("mask", value_kind="email"),
    RedactionRule("mask", value_kind="ssn"),
    RedactionRule("mask", value_kind="phone"),
)


def _hash_token(text: str) -> str:
    return HASH_PREFIX + hashlib.sha256(text.encode()).hexdigest()[:16]


def _already_redacted(value: str) -> bool:
    return MASK in value or HASH_PREFIX in value


def _apply_value_rules(value: str, rules) -> str:
    if _already_redacted(value):
        return value
    for rule in rules:
        if rule.value_kind is None:
            continue
        pattern = VALUE_PATTERNS[rule.value_kind]
        if rule.policy == "mask":
            value = pattern.sub(MASK, value)
        elif rule.policy == "hash":
            value = pattern.sub(lambda m: _hash_token(m.group(0)), value)
        else:  # drop the whole value when it contains the pattern
            if pattern.search(value):
                return ""
    return value


def redact_record(record: dict, rules=DEFAULT_RULES) -> dict:
    """Return a deep copy of ``record`` with all rules applied."""
    out = {}
    for key, value in record.items():
        field_rule = next((r for r in rules
                           if r.field_pattern is not None and fnmatch(key, r.field_pattern)),
                          None)
        if field_rule is not None:
            if field_rule.policy == "drop":
                continue
            if isinstance(value, str) and _already_redacted(value):
                out[key] = value
            elif field_rule.policy == "mask":
                out[key] = MASK
            else:
                out[key] = _hash_token(str(value))
            continue
        if isinstance(value, dict):
            out[key] = redact_record(value, rules)
        elif isinstance(value, list):
            out[key] = [redact_record(v, rules) if isinstance(v, dict)
                        else _apply_value_rules(v, rules) if isinstance(v, str) else v
                        for v in value]
        elif isinstance(value, str):
            out[key] = _apply_value_rules(value, rules)
        else:
            out[key] = value
    return out
