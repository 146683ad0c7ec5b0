"""ONNX model file parsing into plain Python structures.

Field numbers follow the onnx.proto3 schema.  Tensors are materialized as
numpy arrays; both raw_data and the typed repeated fields are supported for
the common data types (float32/64, int32/64, bool).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .wire import WireError, iter_fields, packed_varints, decode_string, to_signed64

# TensorProto.DataType values
DT_FLOAT = 1
DT_UINT8 = 2
DT_INT8 = 3
DT_INT32 = 6
DT_INT64 = 7
DT_BOOL = 9
DT_DOUBLE = 11

NUMPY_DTYPES = {
    DT_FLOAT: np.float32,
    DT_UINT8: np.uint8,
    DT_INT8: np.int8,
    DT_INT32: np.int32,
    DT_INT64: np.int64,
    DT_BOOL: np.bool_,
    DT_DOUBLE: np.float64,
}

# AttributeProto.AttributeType values
ATTR_FLOAT = 1
ATTR_INT = 2
ATTR_STRING = 3
ATTR_TENSOR = 4
ATTR_FLOATS = 6
ATTR_INTS = 7
ATTR_STRINGS = 8


class ModelFormatError(Exception):
    pass


@dataclass
class TensorInfo:
    """Declared graph input/output: name, element type, symbolic dims."""

    name: str
    elem_type: int
    dims: tuple[object, ...]  # int for fixed, str for symbolic


@dataclass
class Node:
    op_type: str
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    attrs: dict[str, Any]
    name: str = ""


@dataclass
class Graph:
    name: str
    nodes: list[Node]
    initializers: dict[str, np.ndarray]
    inputs: list[TensorInfo]
    outputs: list[TensorInfo]


@dataclass
class OnnxModel:
    ir_version: int
    opset_version: int
    producer_name: str
    graph: Graph

    @property
    def input_names(self) -> list[str]:
        return [t.name for t in self.graph.inputs]

    @property
    def output_names(self) -> list[str]:
        return [t.name for t in self.graph.outputs]


def _parse_tensor(data: bytes) -> tuple[str, np.ndarray]:
    dims: list[int] = []
    data_type = DT_FLOAT
    raw: bytes | None = None
    name = ""
    float_data: list[float] = []
    int_data: list[int] = []
    double_data: list[float] = []
    for field_no, wire_type, value in iter_fields(data):
        if field_no == 1:  # dims
            if wire_type == 0:
                dims.append(to_signed64(int(value)))
            else:
                dims.extend(to_signed64(v) for v in packed_varints(value))
        elif field_no == 2:
            data_type = int(value)
        elif field_no == 4:  # float_data
            if wire_type == 0:
                raise ModelFormatError("unexpected varint float_data")
            float_data.extend(struct.unpack(f"<{len(value) // 4}f", value))
        elif field_no == 5 or field_no == 7:  # int32_data / int64_data
            if wire_type == 0:
                int_data.append(to_signed64(int(value)))
            else:
                int_data.extend(to_signed64(v) for v in packed_varints(value))
        elif field_no == 8:
            name = decode_string(value)
        elif field_no == 9:
            raw = bytes(value)
        elif field_no == 10:  # double_data
            double_data.extend(struct.unpack(f"<{len(value) // 8}d", value))
        elif field_no == 13:
            raise ModelFormatError("external tensor data is not supported")
    dtype = NUMPY_DTYPES.get(data_type)
    if dtype is None:
        raise ModelFormatError(f"unsupported tensor data type {data_type}")
    if raw is not None:
        array = np.frombuffer(raw, dtype=dtype)
    elif float_data:
        array = np.asarray(float_data, dtype=dtype)
    elif double_data:
        array = np.asarray(double_data, dtype=dtype)
    elif int_data:
        array = np.asarray(int_data, dtype=dtype)
    else:
        array = np.zeros(0, dtype=dtype)
    shape = tuple(dims) if dims else ()
    if int(np.prod(shape, dtype=np.int64)) != array.size:
        raise ModelFormatError(
            f"tensor {name!r}: {array.size} elements do not fit shape {shape}"
        )
    return name, array.reshape(shape)


def _parse_attribute(data: bytes) -> tuple[str, Any]:
    name = ""
    attr_type = 0
    f_val = 0.0
    i_val = 0
    s_val = b""
    t_val: np.ndarray | None = None
    floats: list[float] = []
    ints: list[int] = []
    strings: list[bytes] = []
    for field_no, wire_type, value in iter_fields(data):
        if field_no == 1:
            name = decode_string(value)
        elif field_no == 2:
            f_val = struct.unpack("<f", struct.pack("<I", value))[0]
        elif field_no == 3:
            i_val = to_signed64(int(value))
        elif field_no == 4:
            s_val = bytes(value)
        elif field_no == 5:
            t_val = _parse_tensor(value)[1]
        elif field_no == 7:
            if wire_type == 5:
                floats.append(struct.unpack("<f", struct.pack("<I", value))[0])
            else:
                floats.extend(struct.unpack(f"<{len(value) // 4}f", value))
        elif field_no == 8:
            if wire_type == 0:
                ints.append(to_signed64(int(value)))
            else:
                ints.extend(to_signed64(v) for v in packed_varints(value))
        elif field_no == 9:
            strings.append(bytes(value))
        elif field_no == 20:
            attr_type = int(value)
    if attr_type == ATTR_FLOAT:
        return name, f_val
    if attr_type == ATTR_INT:
        return name, i_val
    if attr_type == ATTR_STRING:
        return name, s_val.decode("utf-8")
    if attr_type == ATTR_TENSOR:
        return name, t_val
    if attr_type == ATTR_FLOATS:
        return name, tuple(floats)
    if attr_type == ATTR_INTS:
        return name, tuple(ints)
    if attr_type == ATTR_STRINGS:
        return name, tuple(s.decode("utf-8") for s in strings)
    raise ModelFormatError(f"unsupported attribute type {attr_type} for {name!r}")


def _parse_node(data: bytes) -> Node:
    inputs: list[str] = []
    outputs: list[str] = []
    op_type = ""
    node_name = ""
    attrs: dict[str, Any] = {}
    for field_no, _wire_type, value in iter_fields(data):
        if field_no == 1:
            inputs.append(decode_string(value))
        elif field_no == 2:
            outputs.append(decode_string(value))
        elif field_no == 3:
            node_name = decode_string(value)
        elif field_no == 4:
            op_type = decode_string(value)
        elif field_no == 5:
            key, attr_value = _parse_attribute(value)
            attrs[key] = attr_value
    if not op_type:
        raise ModelFormatError(f"node {node_name!r} lacks op_type")
    return Node(op_type, tuple(inputs), tuple(outputs), attrs, node_name)


def _parse_value_info(data: bytes) -> TensorInfo:
    name = ""
    elem_type = 0
    dims: list[object] = []
    for field_no, _wt, value in iter_fields(data):
        if field_no == 1:
            name = decode_string(value)
        elif field_no == 2:  # TypeProto
            for tf_no, _tw, tvalue in iter_fields(value):
                if tf_no != 1:  # tensor_type
                    continue
                for ttf_no, _ttw, ttvalue in iter_fields(tvalue):
                    if ttf_no == 1:
                        elem_type = int(ttvalue)
                    elif ttf_no == 2:  # TensorShapeProto
                        for sf_no, _sw, svalue in iter_fields(ttvalue):
                            if sf_no != 1:  # dim
                                continue
                            dim: object = -1
                            for df_no, _dw, dvalue in iter_fields(svalue):
                                if df_no == 1:
                                    dim = to_signed64(int(dvalue))
                                elif df_no == 2:
                                    dim = decode_string(dvalue)
                            dims.append(dim)
    return TensorInfo(name, elem_type, tuple(dims))


def _parse_graph(data: bytes) -> Graph:
    nodes: list[Node] = []
    initializers: dict[str, np.ndarray] = {}
    inputs: list[TensorInfo] = []
    outputs: list[TensorInfo] = []
    name = ""
    for field_no, _wt, value in iter_fields(data):
        if field_no == 1:
            nodes.append(_parse_node(value))
        elif field_no == 2:
            name = decode_string(value)
        elif field_no == 5:
            tensor_name, array = _parse_tensor(value)
            initializers[tensor_name] = array
        elif field_no == 11:
            inputs.append(_parse_value_info(value))
        elif field_no == 12:
            outputs.append(_parse_value_info(value))
    return Graph(name, nodes, initializers, inputs, outputs)


def parse_model(data: bytes) -> OnnxModel:
    ir_version = 0
    opset_version = 0
    producer = ""
    graph: Graph | None = None
    try:
        for field_no, _wt, value in iter_fields(data):
            if field_no == 1:
                ir_version = to_signed64(int(value))
            elif field_no == 2:
                producer = decode_string(value)
            elif field_no == 7:
                graph = _parse_graph(value)
            elif field_no == 8:  # OperatorSetIdProto
                for op_no, _ow, ovalue in iter_fields(value):
                    if op_no == 2:
                        opset_version = max(opset_version, to_signed64(int(ovalue)))
    except WireError as err:
        raise ModelFormatError(f"not a valid ONNX file: {err}") from err
    if graph is None:
        raise ModelFormatError("model has no graph")
    return OnnxModel(ir_version, opset_version, producer, graph)


def load_model(path: str | Path) -> OnnxModel:
    return parse_model(Path(path).read_bytes())
