"""Protobuf wire-format decoding primitives.

Implements just enough of the protobuf encoding (varints, length-delimited
fields, fixed32/64) to parse ONNX model files without generated bindings.
"""

from __future__ import annotations

import struct
from typing import Iterator

WIRE_VARINT = 0
WIRE_FIXED64 = 1
WIRE_BYTES = 2
WIRE_FIXED32 = 5


class WireError(Exception):
    pass


def read_varint(data: bytes, pos: int) -> tuple[int, int]:
    result = 0
    shift = 0
    while True:
        if pos >= len(data):
            raise WireError("truncated varint")
        byte = data[pos]
        pos += 1
        result |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return result, pos
        shift += 7
        if shift > 70:
            raise WireError("varint too long")


def to_signed64(value: int) -> int:
    return value - (1 << 64) if value >= (1 << 63) else value


def iter_fields(data: bytes) -> Iterator[tuple[int, int, object]]:
    """Yield (field_number, wire_type, raw_value) triples from a message."""
    pos = 0
    while pos < len(data):
        key, pos = read_varint(data, pos)
        field_no, wire_type = key >> 3, key & 0x7
        if wire_type == WIRE_VARINT:
            value, pos = read_varint(data, pos)
        elif wire_type == WIRE_BYTES:
            length, pos = read_varint(data, pos)
            if pos + length > len(data):
                raise WireError(f"truncated bytes field {field_no}")
            value = data[pos : pos + length]
            pos += length
        elif wire_type == WIRE_FIXED64:
            if pos + 8 > len(data):
                raise WireError("truncated fixed64")
            value = struct.unpack_from("<Q", data, pos)[0]
            pos += 8
        elif wire_type == WIRE_FIXED32:
            if pos + 4 > len(data):
                raise WireError("truncated fixed32")
            value = struct.unpack_from("<I", data, pos)[0]
            pos += 4
        else:
            raise WireError(f"unsupported wire type {wire_type} for field {field_no}")
        yield field_no, wire_type, value


def packed_varints(data: bytes) -> list[int]:
    out = []
    pos = 0
    while pos < len(data):
        value, pos = read_varint(data, pos)
        out.append(value)
    return out


def decode_string(value: object) -> str:
    if not isinstance(value, bytes):
        raise WireError("expected length-delimited string")
    return value.decode("utf-8")
