"""Encrypted-at-rest feature storage: AES-256-GCM envelopes.

Blob layout: magic ``AEGB``, key-id length (u16 LE) + key-id bytes,
12-byte nonce, then ciphertext with the 16-byte GCM tag appended.
"""
from __future__ import annotations

import json
import os
import struct
from dataclasses import dataclass

import numpy as np
from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from ..errors import ConfigurationError, DecryptionError, InvalidInputError
from .preprocess import FeatureMatrix

MAGIC = b"AEGB"
NONCE_LEN = 12
TAG_LEN = 16


@dataclass(frozen=True)
class EncryptedBlob:
    key_id: str
    nonce: bytes
    ciphertext: bytes             # includes trailing 16-byte auth tag
    plaintext_length: int

    @property
    def tag(self) -> bytes:
        return self.ciphertext[-TAG_LEN:]

    def to_bytes(self) -> bytes:
        kid = self.key_id.encode()
        return MAGIC + struct.pack("<H", len(kid)) + kid + self.nonce + self.ciphertext

    @classmethod
    def from_bytes(cls, data: bytes) -> "EncryptedBlob":
        if len(data) < 4 + 2 or data[:4] != MAGIC:
            raise InvalidInputError("not an encrypted blob (bad magic)")
        (kid_len,) = struct.unpack_from("<H", data, 4)
        offset = 6 + kid_len
        if len(data) < offset + NONCE_LEN + TAG_LEN:
            raise InvalidInputError("encrypted blob truncated")
        kid = data[6:offset].decode()
        nonce = data[offset:offset + NONCE_LEN]
        ciphertext = data[offset + NONCE_LEN:]
        return cls(key_id=kid, nonce=nonce, ciphertext=ciphertext,
                   plaintext_length=len(ciphertext) - TAG_LEN)


def matrix_to_bytes(matrix: FeatureMatrix) -> bytes:
    names = json.dumps(matrix.column_names).encode()
    return (struct.pack("<III", matrix.rows, matrix.cols, len(names))
            + names + matrix.values.astype("<f8").tobytes())


def matrix_from_bytes(data: bytes) -> FeatureMatrix:
    rows, cols, names_len = struct.unpack_from("<III", data, 0)
    names = json.loads(data[12:12 + names_len])
    values = np.frombuffer(data, dtype="<f8", offset=12 + names_len,
                           count=rows * cols).reshape(rows, cols).copy()
    return FeatureMatrix(values=values, column_names=names)


class EncryptedStore:
    """Stores matrices under one 256-bit key with fresh nonces per store."""

    def __init__(self, key: bytes, key_id: str | None = None):
        if len(key) != 32:
            raise ConfigurationError("AES-256 requires a 32-byte key")
        self._key = key
        self._aes = AESGCM(key)
        self.key_id = key_id or __import__("hashlib").sha256(key).hexdigest()[:12]
        self._used_nonces: set[bytes] = set()

    def _fresh_nonce(self) -> bytes:
        while True:
            nonce = os.urandom(NONCE_LEN)
            if nonce not in self._used_nonces:
                self._used_nonces.add(nonce)
                return nonce

    def store(self, matrix: FeatureMatrix) -> EncryptedBlob:
        plaintext = matrix_to_bytes(matrix)
        nonce = self._fresh_nonce()
        ciphertext = self._aes.encrypt(nonce, plaintext, None)
        return EncryptedBlob(key_id=self.key_id, nonce=nonce,
                             ciphertext=ciphertext,
                             plaintext_length=len(plaintext))

    def load(self, blob: EncryptedBlob) -> FeatureMatrix:
        try:
            plaintext = self._aes.decrypt(blob.nonce, blob.ciphertext, None)
        except InvalidTag:
            raise DecryptionError(
                f"authentication failed for blob under key id {blob.key_id!r}")
        return matrix_from_bytes(plaintext)


def generate_key() -> bytes:
    return AESGCM.generate_key(bit_length=256)
