"""JWT validation: compact serialization, HS256/RSA-SHA256, closed role set.

Every rejection raises a distinct exception class carrying a ``reason`` tag
so callers can count failure modes separately.
"""
from __future__ import annotations

import base64
import hashlib
import hmac
import json
import time
from dataclasses import dataclass

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.asymmetric import padding, rsa

from ..errors import TabserveError

ROLES = ("hr_analyst", "system_admin", "automated_service")
ALGORITHMS = ("HS256", "RS256")


class TokenError(TabserveError):
    reason = "invalid"


class MalformedTokenError(TokenError):
    reason = "malformed"


class UnknownKeyError(TokenError):
    reason = "unknown_key"


class BadSignatureError(TokenError):
    reason = "bad_signature"


class ExpiredTokenError(TokenError):
    reason = "expired"


class IssuerError(TokenError):
    reason = "bad_issuer"


class ClaimsError(TokenError):
    reason = "bad_claims"


@dataclass(frozen=True)
class TokenClaims:
    subject: str
    role: str
    expiry: float
    issuer: str
    key_id: str


def _b64url(data: bytes) -> str:
    return base64.urlsafe_b64encode(data).rstrip(b"=").decode()


def _b64url_decode(text: str) -> bytes:
    pad = -len(text) % 4
    try:
        return base64.urlsafe_b64decode(text + "=" * pad)
    except (ValueError, TypeError) as exc:
        raise MalformedTokenError(f"bad base64url segment: {exc}")


def encode_jwt(claims: TokenClaims, key, alg: str = "HS256") -> str:
    """Sign claims into a compact JWT; ``key`` is HMAC bytes or an RSA private key."""
    if alg not in ALGORITHMS:
        raise MalformedTokenError(f"unsupported alg {alg!r}")
    header = {"alg": alg, "typ": "JWT", "kid": claims.key_id}
    payload = {"sub": claims.subject, "role": claims.role,
               "exp": claims.expiry, "iss": claims.issuer}
    signing_input = (_b64url(json.dumps(header, sort_keys=True).encode()) + "."
                     + _b64url(json.dumps(payload, sort_keys=True).encode()))
    if alg == "HS256":
        sig = hmac.new(key, signing_input.encode(), hashlib.sha256).digest()
    else:
        sig = key.sign(signing_input.encode(), padding.PKCS1v15(), hashes.SHA256())
    return signing_input + "." + _b64url(sig)


def peek_key_id(token: str | bytes) -> str:
    """Read the ``kid`` from the header without verifying anything."""
    if isinstance(token, bytes):
        token = token.decode("ascii", errors="replace")
    parts = token.split(".")
    if len(parts) != 3:
        raise MalformedTokenError("token must have three dot-separated parts")
    try:
        header = json.loads(_b64url_decode(parts[0]))
    except (ValueError, TypeError) as exc:
        raise MalformedTokenError(f"bad header JSON: {exc}")
    kid = header.get("kid")
    if not isinstance(kid, str) or not kid:
        raise MalformedTokenError("header missing kid")
    return kid


def validate_jwt(token: str | bytes, key_source, *, expected_issuer: str | None = None,
                 now: float | None = None) -> TokenClaims:
    """Verify signature, expiry, issuer, and role; return the claims.

    ``key_source`` is a key object (HMAC bytes / RSA public key), a mapping
    kid -> key, or a callable kid -> key (e.g. a JWKS cache). Verification
    order is signature first, then expiry, so an expired-but-forged token is
    reported as forged, and an expired valid token as expired.
    """
    if isinstance(token, bytes):
        token = token.decode("ascii", errors="replace")
    parts = token.split(".")
    if len(parts) != 3:
        raise MalformedTokenError("token must have three dot-separated parts")
    try:
        header = json.loads(_b64url_decode(parts[0]))
        payload = json.loads(_b64url_decode(parts[1]))
    except (ValueError, TypeError) as exc:
        raise MalformedTokenError(f"bad JSON segment: {exc}")
    if not isinstance(header, dict) or not isinstance(payload, dict):
        raise MalformedTokenError("header and payload must be JSON objects")
    alg = header.get("alg")
    if alg not in ALGORITHMS:
        raise MalformedTokenError(f"alg {alg!r} not allowed")
    kid = header.get("kid")
    if not isinstance(kid, str) or not kid:
        raise MalformedTokenError("header missing kid")

    if callable(key_source):
        key = key_source(kid)
    elif isinstance(key_source, dict):
        key = key_source.get(kid)
    else:
        key = key_source
    if key is None:
        raise UnknownKeyError(f"no verification key for kid {kid!r}")

    signing_input = (parts[0] + "." + parts[1]).encode()
    signature = _b64url_decode(parts[2])
    if alg == "HS256":
        if not isinstance(key, (bytes, bytearray)):
            raise UnknownKeyError(f"kid {kid!r} is not an HMAC key")
        expected = hmac.new(key, signing_input, hashlib.sha256).digest()
        if not hmac.compare_digest(expected, signature):
            raise BadSignatureError("HMAC signature mismatch")
    else:
        if not isinstance(key, rsa.RSAPublicKey):
            raise UnknownKeyError(f"kid {kid!r} is not an RSA public key")
        try:
            key.verify(signature, signing_input, padding.PKCS1v15(), hashes.SHA256())
        except InvalidSignature:
            raise BadSignatureError("RSA signature mismatch")

    exp = payload.get("exp")
    if not isinstance(exp, (int, float)):
        raise ClaimsError("exp claim missing or not numeric")
    current = time.time() if now is None else now
    if current >= exp:
        raise ExpiredTokenError(f"token expired {current - exp:.1f}s ago")
    issuer = payload.get("iss", "")
    if expected_issuer is not None and issuer != expected_issuer:
        raise IssuerError(f"issuer {issuer!r} != expected {expected_issuer!r}")
    role = payload.get("role")
    if role not in ROLES:
        raise ClaimsError(f"role {role!r} outside {ROLES}")
    subject = payload.get("sub")
    if not isinstance(subject, str) or not subject:
        raise ClaimsError("sub claim missing")
    return TokenClaims(subject=subject, role=role, expiry=float(exp),
                       issuer=issuer, key_id=kid)
