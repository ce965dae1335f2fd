"""Role-based access control with deny-by-default semantics."""
from __future__ import annotations

from dataclasses import dataclass, field
from fnmatch import fnmatch

from .tokens import TokenClaims


@dataclass(frozen=True)
class RolePolicy:
    rules: dict = field(default_factory=dict)   # role -> tuple of endpoint patterns

    def allows(self, role: str, endpoint: str) -> bool:
        return any(fnmatch(endpoint, pattern) for pattern in self.rules.get(role, ()))


DEFAULT_POLICY = RolePolicy({
    "hr_analyst": ("/infer",),
    "system_admin": ("/infer", "/admin/*"),
    "automated_service": ("/infer",),
})


def authorize(claims: TokenClaims | None, endpoint: str,
              policy: RolePolicy = DEFAULT_POLICY) -> bool:
    """Allow only when a known role's policy covers the endpoint."""
    if claims is None:
        return False
    return policy.allows(claims.role, endpoint)
