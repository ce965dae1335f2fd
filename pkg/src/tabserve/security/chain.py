"""Composable security middleware with per-component latency accounting.

Fixed order: tls (connection-level, enforced by the transport) ->
rate_limit -> jwt (+jwks) -> rbac -> input_validation -> handler -> audit.
Each enabled component is timed with a monotonic clock and reported
separately, which is what lets the overhead breakdown reports attribute
latency to individual controls.
"""
from __future__ import annotations

import hashlib
import json
import time
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError
from .audit import AuditLog
from .ratelimit import TokenBucketLimiter
from .rbac import DEFAULT_POLICY, RolePolicy, authorize
from .tokens import TokenClaims, TokenError, peek_key_id, validate_jwt

COMPONENTS = ("mtls", "rate_limit", "jwt", "jwks_cache", "rbac",
              "input_validation", "audit")

PRESETS: dict[str, frozenset] = {
    "baseline": frozenset(),
    "mtls_only": frozenset({"mtls"}),
    "jwt_only": frozenset({"jwt", "jwks_cache"}),
    "full_il4": frozenset({"mtls", "jwt", "jwks_cache", "audit", "input_validation"}),
}


@dataclass(frozen=True)
class SecurityChainConfig:
    enabled: frozenset

    def __post_init__(self) -> None:
        unknown = self.enabled - set(COMPONENTS)
        if unknown:
            raise ConfigurationError(f"unknown security components: {sorted(unknown)}")
        if "jwks_cache" in self.enabled and "jwt" not in self.enabled:
            raise ConfigurationError("jwks_cache requires jwt")

    @classmethod
    def preset(cls, name: str) -> "SecurityChainConfig":
        if name not in PRESETS:
            raise ConfigurationError(f"unknown preset {name!r}; expected {sorted(PRESETS)}")
        return cls(enabled=PRESETS[name])

    @property
    def requires_mtls(self) -> bool:
        return "mtls" in self.enabled


@dataclass
class RequestContext:
    request_id: str
    peer: str
    endpoint: str
    token: str | bytes | None = None
    payload: list | None = None
    received_at_ns: int = 0


@dataclass
class ChainOutcome:
    allowed: bool = True
    reject_reason: str | None = None
    component_ms: dict = field(default_factory=dict)
    claims: TokenClaims | None = None

    @property
    def security_ms(self) -> float:
        return sum(self.component_ms.values())


def payload_digest(payload) -> str:
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True, default=str).encode()).hexdigest()


class SecurityChain:
    def __init__(self, config: SecurityChainConfig, *,
                 key_source=None, expected_issuer: str | None = None,
                 policy: RolePolicy = DEFAULT_POLICY,
                 rate_limiter: TokenBucketLimiter | None = None,
                 audit_log: AuditLog | None = None,
                 feature_count: int | None = None,
                 clock=time.perf_counter_ns):
        self.config = config
        self.key_source = key_source
        self.expected_issuer = expected_issuer
        self.policy = policy
        self.rate_limiter = rate_limiter
        self.audit_log = audit_log
        self.feature_count = feature_count
        self._clock = clock
        self.rejections: Counter = Counter()
        if "jwt" in config.enabled and key_source is None:
            raise ConfigurationError("jwt component enabled but no key source configured")
        if "rate_limit" in config.enabled and rate_limiter is None:
            raise ConfigurationError("rate_limit component enabled but no limiter configured")
        if "audit" in config.enabled and audit_log is None:
            raise ConfigurationError("audit component enabled but no audit log configured")

    @property
    def requires_mtls(self) -> bool:
        return self.config.requires_mtls

    def _timed(self, outcome: ChainOutcome, name: str, fn):
        t0 = self._clock()
        try:
            return fn()
        finally:
            outcome.component_ms[name] = (
                outcome.component_ms.get(name, 0.0) + (self._clock() - t0) / 1e6)

    def pre(self, ctx: RequestContext) -> ChainOutcome:
        """Run all request-side components; stops at the first rejection."""
        outcome = ChainOutcome()
        enabled = self.config.enabled

        if "rate_limit" in enabled:
            decision = self._timed(outcome, "rate_limit",
                                   lambda: self.rate_limiter.check(ctx.peer))
            if not decision.allowed:
                return self._reject(outcome, "throttled")

        if "jwt" in enabled:
            key = self.key_source
            if "jwks_cache" in enabled:
                try:
                    kid = peek_key_id(ctx.token or "")
                    resolved = self._timed(outcome, "jwks_cache",
                                           lambda: self.key_source(kid))
                    key = {kid: resolved}
                except TokenError as exc:
                    return self._reject(outcome, exc.reason)
            try:
                claims = self._timed(outcome, "jwt", lambda: validate_jwt(
                    ctx.token or "", key, expected_issuer=self.expected_issuer))
                outcome.claims = claims
            except TokenError as exc:
                return self._reject(outcome, exc.reason)

        if "rbac" in enabled:
            ok = self._timed(outcome, "rbac",
                             lambda: authorize(outcome.claims, ctx.endpoint, self.policy))
            if not ok:
                return self._reject(outcome, "forbidden")

        if "input_validation" in enabled:
            reason = self._timed(outcome, "input_validation",
                                 lambda: self._validate_payload(ctx.payload))
            if reason is not None:
                return self._reject(outcome, reason)
        return outcome

    def _validate_payload(self, payload) -> str | None:
        if payload is None or len(payload) == 0:
            return "invalid_input"
        width = self.feature_count
        for row in payload:
            try:
                arr = np.asarray(row, dtype=np.float64)
            except (ValueError, TypeError):
                return "invalid_input"
            if arr.ndim != 1 or (width is not None and arr.size != width):
                return "invalid_input"
            if not np.all(np.isfinite(arr)):
                return "invalid_input"
        return None

    def _reject(self, outcome: ChainOutcome, reason: str) -> ChainOutcome:
        outcome.allowed = False
        outcome.reject_reason = reason
        self.rejections[reason] += 1
        return outcome

    def post(self, ctx: RequestContext, outcome: ChainOutcome, *,
             model_version: str, result: str) -> None:
        """Response-side components (audit append) with their own timing."""
        if "audit" in self.config.enabled:
            subject = outcome.claims.subject if outcome.claims else ctx.peer

            def append():
                return self.audit_log.append(
                    subject=subject, endpoint=ctx.endpoint,
                    input_digest=payload_digest(ctx.payload),
                    model_version=model_version, outcome=result,
                    context={"request_id": ctx.request_id, "peer": ctx.peer})

            self._timed(outcome, "audit", append)
