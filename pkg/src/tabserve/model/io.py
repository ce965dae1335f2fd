"""Model serialization: length-prefixed binary sections with a trailing CRC-32C.

Layout: magic ``TBNT``, format version (u16 LE), three length-prefixed
sections (metadata JSON, normalization stats, flat parameters, all little-
endian float64), then CRC-32C over everything before the checksum.
"""
from __future__ import annotations

import json
import struct

import numpy as np

from ..errors import (ChecksumError, FormatVersionError, ModelFormatError,
                      TruncatedStreamError)
from .config import ModelConfig
from .network import TabNetModel

MAGIC = b"TBNT"
FORMAT_VERSION = 1

# CRC-32C (Castagnoli, reflected 0x82F63B78); no suitable wheel on the package
# index, and the format pins this polynomial, so a table-driven fallback it is.
_CRC_TABLE = []
for _i in range(256):
    _crc = _i
    for _ in range(8):
        _crc = (_crc >> 1) ^ 0x82F63B78 if _crc & 1 else _crc >> 1
    _CRC_TABLE.append(_crc)


def crc32c(data: bytes, crc: int = 0) -> int:
    crc ^= 0xFFFFFFFF
    for b in data:
        crc = (crc >> 8) ^ _CRC_TABLE[(crc ^ b) & 0xFF]
    return crc ^ 0xFFFFFFFF


def _section(payload: bytes) -> bytes:
    return struct.pack("<I", len(payload)) + payload


def save_model(model: TabNetModel) -> bytes:
    param_order = sorted(model.params)
    meta = {
        "model_version": model.model_version,
        "config": model.config.to_dict(),
        "param_order": param_order,
        "param_shapes": {k: list(model.params[k].shape) for k in param_order},
    }
    meta_bytes = json.dumps(meta, sort_keys=True).encode()
    stats = np.concatenate([model.norm_mean, model.norm_var]).astype("<f8").tobytes()
    flat = np.concatenate([model.params[k].ravel() for k in param_order])
    body = (MAGIC + struct.pack("<H", FORMAT_VERSION)
            + _section(meta_bytes) + _section(stats)
            + _section(flat.astype("<f8").tobytes()))
    return body + struct.pack("<I", crc32c(body))


def load_model(stream: bytes) -> TabNetModel:
    if len(stream) < 10:
        raise TruncatedStreamError("stream shorter than header")
    if stream[:4] != MAGIC:
        raise ModelFormatError("bad magic bytes")
    (version,) = struct.unpack_from("<H", stream, 4)
    if version != FORMAT_VERSION:
        raise FormatVersionError(
            f"format version {version} not supported (expected {FORMAT_VERSION})")

    offset = 6
    sections = []
    for _ in range(3):
        if offset + 4 > len(stream) - 4:
            raise TruncatedStreamError("section header missing")
        (length,) = struct.unpack_from("<I", stream, offset)
        offset += 4
        if offset + length > len(stream) - 4:
            raise TruncatedStreamError("section payload incomplete")
        sections.append(stream[offset:offset + length])
        offset += length
    if offset + 4 != len(stream):
        raise ModelFormatError("unexpected trailing bytes")
    (expected,) = struct.unpack_from("<I", stream, offset)
    if crc32c(stream[:offset]) != expected:
        raise ChecksumError("CRC-32C mismatch")

    try:
        meta = json.loads(sections[0])
        config = ModelConfig.from_dict(meta["config"])
        param_order = meta["param_order"]
        shapes = {k: tuple(v) for k, v in meta["param_shapes"].items()}
    except (KeyError, ValueError, TypeError) as exc:
        raise ModelFormatError(f"bad metadata section: {exc}") from exc

    stats = np.frombuffer(sections[1], dtype="<f8")
    f = config.feature_count
    if stats.size != 2 * f:
        raise ModelFormatError("normalization stats size mismatch")
    flat = np.frombuffer(sections[2], dtype="<f8")
    params = {}
    pos = 0
    for k in param_order:
        size = int(np.prod(shapes[k]))
        if pos + size > flat.size:
            raise ModelFormatError("parameter section size mismatch")
        params[k] = flat[pos:pos + size].reshape(shapes[k]).copy()
        pos += size
    if pos != flat.size:
        raise ModelFormatError("parameter section size mismatch")
    return TabNetModel(config=config, params=params,
                       norm_mean=stats[:f].copy(), norm_var=stats[f:].copy(),
                       model_version=meta["model_version"])


def save_model_file(model: TabNetModel, path) -> None:
    with open(path, "wb") as fh:
        fh.write(save_model(model))


def load_model_file(path) -> TabNetModel:
    with open(path, "rb") as fh:
        return load_model(fh.read())
