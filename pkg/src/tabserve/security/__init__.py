from .tokens import (ALGORITHMS, ROLES, BadSignatureError, ClaimsError, ExpiredTokenError,
                     IssuerError, MalformedTokenError, TokenClaims, TokenError,
                     UnknownKeyError, encode_jwt, peek_key_id, validate_jwt)
from .jwks import JwksCache, parse_jwks, render_jwks, url_fetcher
from .rbac import DEFAULT_POLICY, RolePolicy, authorize
from .ratelimit import RateDecision, TokenBucketLimiter
from .redaction import DEFAULT_RULES, HASH_PREFIX, MASK, RedactionRule, redact_record
from .audit import GENESIS_HASH, AuditLog, AuditRecord, VerifyResult, verify_audit_chain
from .tls import (EchoTlsServer, Identity, TestCA, make_client_context,
                  make_server_context, tls_handshake)
from .chain import (COMPONENTS, PRESETS, ChainOutcome, RequestContext, SecurityChain,
                    SecurityChainConfig, payload_digest)

__all__ = [
    "TokenClaims", "encode_jwt", "validate_jwt", "peek_key_id", "ROLES", "ALGORITHMS",
    "TokenError", "MalformedTokenError", "UnknownKeyError", "BadSignatureError",
    "ExpiredTokenError", "IssuerError", "ClaimsError",
    "JwksCache", "render_jwks", "parse_jwks", "url_fetcher",
    "RolePolicy", "DEFAULT_POLICY", "authorize",
    "TokenBucketLimiter", "RateDecision",
    "RedactionRule", "redact_record", "DEFAULT_RULES", "MASK", "HASH_PREFIX",
    "AuditLog", "AuditRecord", "verify_audit_chain", "VerifyResult", "GENESIS_HASH",
    "TestCA", "Identity", "EchoTlsServer", "make_server_context", "make_client_context",
    "tls_handshake",
    "SecurityChain", "SecurityChainConfig", "RequestContext", "ChainOutcome",
    "PRESETS", "COMPONENTS", "payload_digest",
]
