"""Hand-rolled ONNX protobuf encoder for tests.

Deliberately independent of the package decoder: tests encode small models
with this module and the package must read them back, cross-validating the
wire format from both sides.
"""

import struct

import numpy as np

DT_FLOAT, DT_INT32, DT_INT64, DT_BOOL, DT_DOUBLE = 1, 6, 7, 9, 11
_DTYPES = {
    np.dtype("float32"): DT_FLOAT,
    np.dtype("int32"): DT_INT32,
    np.dtype("int64"): DT_INT64,
    np.dtype("bool"): DT_BOOL,
    np.dtype("float64"): DT_DOUBLE,
}


def varint(value: int) -> bytes:
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def tag(field: int, wire: int) -> bytes:
    return varint((field << 3) | wire)


def f_varint(field: int, value: int) -> bytes:
    return tag(field, 0) + varint(value)


def f_bytes(field: int, payload: bytes) -> bytes:
    return tag(field, 2) + varint(len(payload)) + payload


def f_str(field: int, text: str) -> bytes:
    return f_bytes(field, text.encode("utf-8"))


def f_float(field: int, value: float) -> bytes:
    return tag(field, 5) + struct.pack("<f", value)


def tensor(name: str, array: np.ndarray, use_raw: bool = True) -> bytes:
    array = np.ascontiguousarray(array)
    out = b""
    for dim in array.shape:
        out += f_varint(1, dim)
    out += f_varint(2, _DTYPES[array.dtype])
    if use_raw:
        out += f_bytes(9, array.tobytes())
    elif array.dtype == np.dtype("float32"):
        out += f_bytes(4, struct.pack(f"<{array.size}f", *array.ravel()))
    elif array.dtype == np.dtype("int64"):
        out += f_bytes(7, b"".join(varint(int(v) & (2**64 - 1)) for v in array.ravel()))
    else:
        raise ValueError("typed encoding only for float32/int64")
    out += f_str(8, name)
    return out


def attribute(name: str, value) -> bytes:
    out = f_str(1, name)
    if isinstance(value, bool):
        out += f_varint(3, int(value)) + f_varint(20, 2)
    elif isinstance(value, int):
        out += f_varint(3, value & (2**64 - 1)) + f_varint(20, 2)
    elif isinstance(value, float):
        out += f_float(2, value) + f_varint(20, 1)
    elif isinstance(value, str):
        out += f_str(4, value) + f_varint(20, 3)
    elif isinstance(value, np.ndarray):
        out += f_bytes(5, tensor("", value)) + f_varint(20, 4)
    elif isinstance(value, (tuple, list)):
        for item in value:
            out += f_varint(8, int(item) & (2**64 - 1))
        out += f_varint(20, 7)
    else:
        raise ValueError(f"no encoding for attribute {value!r}")
    return out


def node(op_type: str, inputs, outputs, **attrs) -> bytes:
    out = b""
    for name in inputs:
        out += f_str(1, name)
    for name in outputs:
        out += f_str(2, name)
    out += f_str(4, op_type)
    for key, value in attrs.items():
        out += f_bytes(5, attribute(key, value))
    return out


def value_info(name: str, elem_type: int, dims) -> bytes:
    shape = b""
    for dim in dims:
        if isinstance(dim, str):
            shape += f_bytes(1, f_str(2, dim))
        else:
            shape += f_bytes(1, f_varint(1, dim))
    tensor_type = f_varint(1, elem_type) + f_bytes(2, shape)
    return f_str(1, name) + f_bytes(2, f_bytes(1, tensor_type))


def graph(nodes, initializers, inputs, outputs, name="g") -> bytes:
    out = b""
    for encoded in nodes:
        out += f_bytes(1, encoded)
    out += f_str(2, name)
    for encoded in initializers:
        out += f_bytes(5, encoded)
    for encoded in inputs:
        out += f_bytes(11, encoded)
    for encoded in outputs:
        out += f_bytes(12, encoded)
    return out


def model(graph_bytes: bytes, opset: int = 17, ir_version: int = 8) -> bytes:
    opset_import = f_str(1, "") + f_varint(2, opset)
    return (
        f_varint(1, ir_version)
        + f_str(2, "onnx-test-util")
        + f_bytes(7, graph_bytes)
        + f_bytes(8, opset_import)
    )


def lookup_logits_model(table: np.ndarray) -> bytes:
    """Model with the scorer signature: logits[b,s,:] = table[input_ids[b,s]].

    The attention_mask/token_type_ids inputs are declared (the contract
    requires them) but do not influence the output.
    """
    batch_seq = ("batch", "seq")
    nodes = [node("Gather", ["table", "input_ids"], ["logits"], axis=0)]
    return model(
        graph(
            nodes=nodes,
            initializers=[tensor("table", table.astype(np.float32))],
            inputs=[
                value_info("input_ids", DT_INT64, batch_seq),
                value_info("attention_mask", DT_INT64, batch_seq),
                value_info("token_type_ids", DT_INT64, batch_seq),
            ],
            outputs=[value_info("logits", DT_FLOAT, ("batch", "seq", table.shape[1]))],
        )
    )
