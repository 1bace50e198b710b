"""
序列化工具
矩阵 CSV（行优先，精确值写作 "a/b"）与 JSON 输出，以及 CSV 矩阵读取
"""

import io
import json
import math
from typing import Any, Dict, List, Union

import pandas as pd

from .domain import GeneralMatrix, ScalarMode, SymMatrix, format_scalar, parse_scalar
from .exceptions import ValidationError

AnyMatrix = Union[SymMatrix, GeneralMatrix]


def _text_rows(matrix: AnyMatrix) -> List[List[str]]:
    return [[format_scalar(e) for e in row] for row in matrix.rows()]


def matrix_to_csv(matrix: AnyMatrix) -> str:
    """无表头、无索引的 CSV 文本，末尾不带换行"""
    frame = pd.DataFrame(_text_rows(matrix))
    return frame.to_csv(header=False, index=False, lineterminator="\n").rstrip("\n")


def matrix_to_dict(matrix: AnyMatrix) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "mode": matrix.mode.value,
        "entries": _text_rows(matrix),
    }
    if isinstance(matrix, SymMatrix):
        data["order"] = matrix.order
        data["provenance"] = matrix.provenance.to_dict() if matrix.provenance else None
    else:
        data["shape"] = list(matrix.shape)
    return data


def read_matrix_csv(text: str, exact: bool = True, symmetric: bool = True) -> AnyMatrix:
    """
    读取 CSV 矩阵

    Args:
        text: CSV 文本
        exact: 是否按有理数解析
        symmetric: 是否构造为 SymMatrix
    """
    frame = pd.read_csv(io.StringIO(text), header=None, dtype=str, skipinitialspace=True)
    if frame.isnull().values.any():
        raise ValidationError("CSV 矩阵存在缺失元素")
    rows = [[parse_scalar(cell, exact=exact) for cell in row] for row in frame.values.tolist()]
    mode = ScalarMode.EXACT if exact else ScalarMode.FLOAT
    if symmetric:
        return SymMatrix.from_rows(rows, mode)
    return GeneralMatrix.from_rows(rows, mode)


def json_safe(value: Any) -> Any:
    """将非有限浮点转为字符串，保证输出为标准 JSON"""
    if isinstance(value, float) and not math.isfinite(value):
        if math.isnan(value):
            return "NaN"
        return "Infinity" if value > 0 else "-Infinity"
    if isinstance(value, dict):
        return {k: json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    return value


def dumps(data: Any, indent: Union[int, None] = None) -> str:
    """确定性 JSON 输出（键按插入顺序，浮点按 repr 往返精度）"""
    return json.dumps(json_safe(data), ensure_ascii=False, indent=indent, allow_nan=False)
