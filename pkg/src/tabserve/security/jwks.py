"""JSON Web Key Set parsing and a TTL cache over a fetch callback."""
from __future__ import annotations

import base64
import json
import threading
import time
import urllib.request

from cryptography.hazmat.primitives.asymmetric import rsa

from ..errors import ConfigurationError
from .tokens import UnknownKeyError


def _b64url_uint(n: int) -> str:
    data = n.to_bytes((n.bit_length() + 7) // 8 or 1, "big")
    return base64.urlsafe_b64encode(data).rstrip(b"=").decode()


def _uint_from_b64url(text: str) -> int:
    pad = -len(text) % 4
    return int.from_bytes(base64.urlsafe_b64decode(text + "=" * pad), "big")


def render_jwks(keys: dict) -> dict:
    """Serialize kid -> key (HMAC bytes or RSA public key) into a JWKS document."""
    out = []
    for kid, key in keys.items():
        if isinstance(key, (bytes, bytearray)):
            out.append({"kid": kid, "kty": "oct", "alg": "HS256",
                        "k": base64.urlsafe_b64encode(bytes(key)).rstrip(b"=").decode()})
        elif isinstance(key, rsa.RSAPublicKey):
            numbers = key.public_numbers()
            out.append({"kid": kid, "kty": "RSA", "alg": "RS256",
                        "n": _b64url_uint(numbers.n), "e": _b64url_uint(numbers.e)})
        else:
            raise ConfigurationError(f"cannot serialize key type {type(key)!r} for kid {kid!r}")
    return {"keys": out}


def parse_jwks(doc: dict) -> dict:
    keys = {}
    for entry in doc.get("keys", []):
        kid = entry.get("kid")
        kty = entry.get("kty")
        if not kid:
            continue
        if kty == "oct":
            pad = -len(entry["k"]) % 4
            keys[kid] = base64.urlsafe_b64decode(entry["k"] + "=" * pad)
        elif kty == "RSA":
            numbers = rsa.RSAPublicNumbers(_uint_from_b64url(entry["e"]),
                                           _uint_from_b64url(entry["n"]))
            keys[kid] = numbers.public_key()
    return keys


def url_fetcher(url: str, timeout: float = 2.0):
    def fetch() -> dict:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            return json.loads(resp.read())
    return fetch


class JwksCache:
    """Caches the parsed key set; refetches once per TTL expiry or cache miss."""

    def __init__(self, fetcher, ttl_s: float = 300.0, clock=time.monotonic):
        self._fetcher = fetcher
        self.ttl_s = ttl_s
        self._clock = clock
        self._lock = threading.Lock()
        self._keys: dict = {}
        self._expires_at = -float("inf")
        self.fetch_count = 0
        self.hit_count = 0

    def _refresh_locked(self) -> None:
        self._keys = parse_jwks(self._fetcher())
        self.fetch_count += 1
        self._expires_at = self._clock() + self.ttl_s

    def lookup(self, kid: str):
        with self._lock:
            now = self._clock()
            if now < self._expires_at and kid in self._keys:
                self.hit_count += 1
                return self._keys[kid]
            self._refresh_locked()
            key = self._keys.get(kid)
            if key is None:
                raise UnknownKeyError(f"kid {kid!r} not in key set after fetch")
            return key

    def __call__(self, kid: str):
        return self.lookup(kid)
