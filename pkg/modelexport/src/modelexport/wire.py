"""ONNX protobuf serialization primitives (writer side).

Emits standard ONNX files from plain Python structures.  Only what a BERT
encoder graph needs: float32/int64 tensors as raw data, scalar and
int-list node attributes, symbolic tensor shapes, a single opset import.
"""

from __future__ import annotations

import struct

import numpy as np

DT_FLOAT = 1
DT_INT64 = 7

_DTYPES = {
    np.dtype("float32"): DT_FLOAT,
    np.dtype("int64"): DT_INT64,
}


def _varint(value: int) -> bytes:
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def _tag(field: int, wire: int) -> bytes:
    return _varint((field << 3) | wire)


def _field_varint(field: int, value: int) -> bytes:
    return _tag(field, 0) + _varint(value & (2**64 - 1))


def _field_bytes(field: int, payload: bytes) -> bytes:
    return _tag(field, 2) + _varint(len(payload)) + payload


def _field_str(field: int, text: str) -> bytes:
    return _field_bytes(field, text.encode("utf-8"))


def _field_float(field: int, value: float) -> bytes:
    return _tag(field, 5) + struct.pack("<f", value)


def tensor(name: str, array: np.ndarray) -> bytes:
    """TensorProto with raw little-endian data."""
    array = np.ascontiguousarray(array)
    if array.dtype not in _DTYPES:
        raise ValueError(f"unsupported tensor dtype {array.dtype}")
    out = b""
    for dim in array.shape:
        out += _field_varint(1, dim)
    out += _field_varint(2, _DTYPES[array.dtype])
    out += _field_str(8, name)
    out += _field_bytes(9, array.tobytes())
    return out


def _attribute(name: str, value) -> bytes:
    out = _field_str(1, name)
    if isinstance(value, int):
        out += _field_varint(3, value) + _field_varint(20, 2)
    elif isinstance(value, float):
        out += _field_float(2, value) + _field_varint(20, 1)
    elif isinstance(value, (tuple, list)):
        for item in value:
            out += _field_varint(8, int(item))
        out += _field_varint(20, 7)
    else:
        raise ValueError(f"unsupported attribute value {value!r}")
    return out


def node(op_type: str, inputs, outputs, name: str = "", **attrs) -> bytes:
    out = b""
    for input_name in inputs:
        out += _field_str(1, input_name)
    for output_name in outputs:
        out += _field_str(2, output_name)
    if name:
        out += _field_str(3, name)
    out += _field_str(4, op_type)
    for key, value in attrs.items():
        out += _field_bytes(5, _attribute(key, value))
    return out


def value_info(name: str, elem_type: int, dims) -> bytes:
    shape = b""
    for dim in dims:
        if isinstance(dim, str):
            shape += _field_bytes(1, _field_str(2, dim))
        else:
            shape += _field_bytes(1, _field_varint(1, dim))
    tensor_type = _field_varint(1, elem_type) + _field_bytes(2, shape)
    return _field_str(1, name) + _field_bytes(2, _field_bytes(1, tensor_type))


def graph(nodes, initializers, inputs, outputs, name: str = "bert-mlm") -> bytes:
    out = b""
    for encoded in nodes:
        out += _field_bytes(1, encoded)
    out += _field_str(2, name)
    for encoded in initializers:
        out += _field_bytes(5, encoded)
    for encoded in inputs:
        out += _field_bytes(11, encoded)
    for encoded in outputs:
        out += _field_bytes(12, encoded)
    return out


def model(graph_bytes: bytes, opset: int = 17, producer: str = "modelexport") -> bytes:
    opset_import = _field_str(1, "") + _field_varint(2, opset)
    return (
        _field_varint(1, 8)  # ir_version
        + _field_str(2, producer)
        + _field_bytes(7, graph_bytes)
        + _field_bytes(8, opset_import)
    )
