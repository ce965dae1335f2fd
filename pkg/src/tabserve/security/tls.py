"""Mutual TLS plumbing: a self-contained test CA and TLS 1.2+ contexts.

Certificate issuance uses an in-process CA so the mTLS handshake tests and
the serving endpoint never depend on external key material. Session
resumption is exercised through the client-side ``SSLSession`` handle
(pinned to TLS 1.2, where resumption semantics are observable and the
resumed handshake skips the certificate exchange).
"""
from __future__ import annotations

import datetime
import socket
import ssl
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from cryptography import x509
from cryptography.hazmat.primitives import hashes, serialization
from cryptography.hazmat.primitives.asymmetric import rsa
from cryptography.x509.oid import NameOID


def _make_key() -> rsa.RSAPrivateKey:
    return rsa.generate_private_key(public_exponent=65537, key_size=2048)


def _name(common_name: str) -> x509.Name:
    return x509.Name([x509.NameAttribute(NameOID.COMMON_NAME, common_name)])


def _pem_key(key) -> bytes:
    return key.private_bytes(serialization.Encoding.PEM,
                             serialization.PrivateFormat.TraditionalOpenSSL,
                             serialization.NoEncryption())


def _pem_cert(cert) -> bytes:
    return cert.public_bytes(serialization.Encoding.PEM)


@dataclass
class Identity:
    name: str
    cert_pem: bytes
    key_pem: bytes
    cert_file: Path | None = None
    key_file: Path | None = None

    def write(self, directory) -> "Identity":
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        self.cert_file = directory / f"{self.name}.cert.pem"
        self.key_file = directory / f"{self.name}.key.pem"
        self.cert_file.write_bytes(self.cert_pem)
        self.key_file.write_bytes(self.key_pem)
        return self


class TestCA:
    """Self-signed CA that issues short-lived server and client certificates."""

    def __init__(self, common_name: str = "tabserve-test-ca"):
        self.key = _make_key()
        now = datetime.datetime.now(datetime.timezone.utc)
        builder = (x509.CertificateBuilder()
                   .subject_name(_name(common_name))
                   .issuer_name(_name(common_name))
                   .public_key(self.key.public_key())
                   .serial_number(x509.random_serial_number())
                   .not_valid_before(now - datetime.timedelta(minutes=5))
                   .not_valid_after(now + datetime.timedelta(days=7))
                   .add_extension(x509.BasicConstraints(ca=True, path_length=0), critical=True))
        self.cert = builder.sign(self.key, hashes.SHA256())
        self.cert_pem = _pem_cert(self.cert)
        self.ca_file: Path | None = None

    def write_ca(self, directory) -> Path:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        self.ca_file = directory / "ca.cert.pem"
        self.ca_file.write_bytes(self.cert_pem)
        return self.ca_file

    def issue(self, common_name: str, *, dns_name: str = "localhost") -> Identity:
        key = _make_key()
        now = datetime.datetime.now(datetime.timezone.utc)
        builder = (x509.CertificateBuilder()
                   .subject_name(_name(common_name))
                   .issuer_name(self.cert.subject)
                   .public_key(key.public_key())
                   .serial_number(x509.random_serial_number())
                   .not_valid_before(now - datetime.timedelta(minutes=5))
                   .not_valid_after(now + datetime.timedelta(days=7))
                   .add_extension(x509.SubjectAlternativeName(
                       [x509.DNSName(dns_name), x509.DNSName(common_name)]), critical=False)
                   .add_extension(x509.BasicConstraints(ca=False, path_length=None),
                                  critical=True))
        cert = builder.sign(self.key, hashes.SHA256())
        return Identity(name=common_name, cert_pem=_pem_cert(cert), key_pem=_pem_key(key))

    def issue_expired(self, common_name: str) -> Identity:
        key = _make_key()
        now = datetime.datetime.now(datetime.timezone.utc)
        builder = (x509.CertificateBuilder()
                   .subject_name(_name(common_name))
                   .issuer_name(self.cert.subject)
                   .public_key(key.public_key())
                   .serial_number(x509.random_serial_number())
                   .not_valid_before(now - datetime.timedelta(days=14))
                   .not_valid_after(now - datetime.timedelta(days=7))
                   .add_extension(x509.BasicConstraints(ca=False, path_length=None),
                                  critical=True))
        cert = builder.sign(self.key, hashes.SHA256())
        return Identity(name=common_name, cert_pem=_pem_cert(cert), key_pem=_pem_key(key))


def make_server_context(identity: Identity, ca_file, *,
                        require_client_cert: bool = True) -> ssl.SSLContext:
    ctx = ssl.SSLContext(ssl.PROTOCOL_TLS_SERVER)
    ctx.minimum_version = ssl.TLSVersion.TLSv1_2
    ctx.load_cert_chain(certfile=str(identity.cert_file), keyfile=str(identity.key_file))
    if require_client_cert:
        ctx.verify_mode = ssl.CERT_REQUIRED
        ctx.load_verify_locations(cafile=str(ca_file))
    return ctx


def make_client_context(ca_file, identity: Identity | None = None, *,
                        max_tls12: bool = False) -> ssl.SSLContext:
    ctx = ssl.SSLContext(ssl.PROTOCOL_TLS_CLIENT)
    ctx.minimum_version = ssl.TLSVersion.TLSv1_2
    if max_tls12:
        ctx.maximum_version = ssl.TLSVersion.TLSv1_2
    ctx.load_verify_locations(cafile=str(ca_file))
    ctx.check_hostname = False   # test CA uses synthetic names
    ctx.verify_mode = ssl.CERT_REQUIRED
    if identity is not None:
        ctx.load_cert_chain(certfile=str(identity.cert_file),
                            keyfile=str(identity.key_file))
    return ctx


class EchoTlsServer:
    """Loopback mTLS echo server used by the handshake tests."""

    def __init__(self, server_ctx: ssl.SSLContext, host: str = "127.0.0.1"):
        self._ctx = server_ctx
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._sock.bind((host, 0))
        self._sock.listen(32)
        self.host, self.port = self._sock.getsockname()
        self._stop = threading.Event()
        self._thread = threading.Thread(target=self._loop, daemon=True)
        self.handshake_failures = 0

    def start(self) -> "EchoTlsServer":
        self._thread.start()
        return self

    def _loop(self) -> None:
        self._sock.settimeout(0.2)
        while not self._stop.is_set():
            try:
                conn, _ = self._sock.accept()
            except socket.timeout:
                continue
            except OSError:
                return
            try:
                tls = self._ctx.wrap_socket(conn, server_side=True)
                data = tls.recv(4096)
                if data:
                    tls.sendall(data)
                tls.close()
            except (ssl.SSLError, OSError):
                self.handshake_failures += 1
                conn.close()

    def stop(self) -> None:
        self._stop.set()
        self._thread.join(timeout=5)
        self._sock.close()


def tls_handshake(host: str, port: int, client_ctx: ssl.SSLContext,
                  session: ssl.SSLSession | None = None,
                  payload: bytes = b"ping") -> tuple[float, ssl.SSLSession, bool]:
    """One connect/echo round trip; returns (handshake_seconds, session, reused)."""
    raw = socket.create_connection((host, port), timeout=5)
    t0 = time.perf_counter()
    tls = client_ctx.wrap_socket(raw, server_hostname=host, session=session)
    elapsed = time.perf_counter() - t0
    reused = tls.session_reused
    new_session = tls.session
    tls.sendall(payload)
    tls.recv(4096)
    tls.close()
    return elapsed, new_session, reused
