"""
领域类型
节点集合、指数、惯性指数、对称矩阵、矩阵族描述等共享类型，
以及标量模式（精确有理数 / binary64）的统一处理。
所有类型构造后不可变，可安全地跨线程只读共享。
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from numbers import Integral, Rational
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import (
    DuplicatePointError,
    LengthMismatchError,
    NonpositivePointError,
    ScalarModeMismatchError,
    ValidationError,
)

Scalar = Union[Fraction, float]

# 浮点模式下判定整数指数的容差
INTEGER_TOLERANCE = 1e-12


class ScalarMode(Enum):
    """标量模式"""
    EXACT = "exact"   # 任意精度有理数
    FLOAT = "float"   # binary64


# ---------------------------------------------------------------- 标量工具

def is_exact_scalar(value: Any) -> bool:
    """判断是否可无损表示为有理数（int / Fraction / 有理字符串）"""
    if isinstance(value, bool):
        return False
    if isinstance(value, (Integral, Rational)):
        return True
    if isinstance(value, str):
        try:
            Fraction(value.strip())
            return True
        except (ValueError, ZeroDivisionError):
            return False
    return False


def to_exact(value: Any) -> Fraction:
    """转换为 Fraction，拒绝二进制浮点以避免静默混用模式"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ScalarModeMismatchError(f"布尔值不是有效标量: {value!r}")
    if isinstance(value, (Integral, Rational)):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"无法解析为有理数: {value!r}") from exc
    raise ScalarModeMismatchError(f"精确模式不接受浮点标量: {value!r}")


def to_float(value: Any) -> float:
    """转换为 binary64"""
    if isinstance(value, str):
        value = value.strip()
        try:
            return float(Fraction(value))
        except (ValueError, ZeroDivisionError):
            return float(value)
    return float(value)


def format_scalar(value: Scalar) -> str:
    """
    标量文本格式

    精确值输出 "a/b"（整数输出 "a"），浮点值输出可往返的最短十进制表示
    """
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, Integral):
        return str(int(value))
    return repr(float(value))


def parse_scalar(text: str, exact: bool = True) -> Scalar:
    """解析 format_scalar 的输出"""
    if exact:
        return to_exact(text)
    return to_float(text)


# ---------------------------------------------------------------- 节点

@dataclass(frozen=True)
class Points:
    """严格递增的正节点 p_1 < p_2 < ... < p_n"""

    values: Tuple[Scalar, ...]

    def __post_init__(self):
        if len(self.values) == 0:
            raise ValidationError("节点集合不能为空")
        for value in self.values:
            if value <= 0:
                raise NonpositivePointError(f"节点必须为正: {format_scalar(value)}")
        for left, right in zip(self.values, self.values[1:]):
            if not left < right:
                if left == right:
                    raise DuplicatePointError(f"节点重复: {format_scalar(left)}")
                raise ValidationError("节点必须严格递增")

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def mode(self) -> ScalarMode:
        return ScalarMode.EXACT if isinstance(self.values[0], Fraction) else ScalarMode.FLOAT

    @property
    def is_exact(self) -> bool:
        return self.mode is ScalarMode.EXACT

    def as_floats(self) -> np.ndarray:
        return np.array([float(v) for v in self.values], dtype=float)

    def to_float_points(self) -> "Points":
        return Points(tuple(float(v) for v in self.values))

    def scaled(self, factor: Scalar) -> "Points":
        """统一缩放 c·p"""
        if self.is_exact:
            c = to_exact(factor)
        else:
            c = float(factor)
        return validate_points([c * v for v in self.values], exact=self.is_exact)

    def to_text(self) -> str:
        return ",".join(format_scalar(v) for v in self.values)

    @classmethod
    def from_text(cls, text: str, exact: Optional[bool] = None) -> "Points":
        parts = [part for part in text.replace(" ", "").split(",") if part]
        return validate_points(parts, exact=exact)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, index):
        return self.values[index]


def validate_points(raw: Iterable[Any], exact: Optional[bool] = None) -> Points:
    """
    校验并规范化节点

    Args:
        raw: 原始标量列表（int / Fraction / 有理字符串 / float）
        exact: 强制模式；None 时全部可精确表示则取精确模式

    Returns:
        升序排列的 Points

    Raises:
        DuplicatePointError: 存在相等节点
        NonpositivePointError: 存在非正节点
    """
    items = list(raw)
    if not items:
        raise ValidationError("节点集合不能为空")
    if exact is None:
        exact = all(is_exact_scalar(item) for item in items)
    if exact:
        values = [to_exact(item) for item in items]
    else:
        values = [to_float(item) for item in items]
        for value in values:
            if not math.isfinite(value):
                raise ValidationError(f"节点必须为有限值: {value}")

    for value in values:
        if value <= 0:
            raise NonpositivePointError(f"节点必须为正: {format_scalar(value)}")

    ordered = sorted(values)
    for left, right in zip(ordered, ordered[1:]):
        if left == right:
            raise DuplicatePointError(f"节点重复: {format_scalar(left)}")

    return Points(tuple(ordered))


# ---------------------------------------------------------------- 指数

@dataclass(frozen=True)
class Exponent:
    """
    实指数 r

    精确模式下整数性按有理数精确判定，浮点模式下按 |r - round(r)| < 1e-12 判定
    """

    value: Scalar

    @classmethod
    def of(cls, raw: Any) -> "Exponent":
        if isinstance(raw, Exponent):
            return raw
        if isinstance(raw, (np.floating, float)):
            value = float(raw)
            if not math.isfinite(value):
                raise ValidationError(f"指数必须为有限值: {raw}")
            return cls(value)
        if isinstance(raw, np.integer):
            return cls(Fraction(int(raw)))
        return cls(to_exact(raw))

    @property
    def is_exact(self) -> bool:
        return isinstance(self.value, Fraction)

    @property
    def is_integer(self) -> bool:
        if isinstance(self.value, Fraction):
            return self.value.denominator == 1
        return abs(self.value - round(self.value)) < INTEGER_TOLERANCE

    @property
    def as_int(self) -> int:
        if not self.is_integer:
            raise ValidationError(f"指数不是整数: {format_scalar(self.value)}")
        if isinstance(self.value, Fraction):
            return self.value.numerator
        return int(round(self.value))

    @property
    def is_odd_integer(self) -> bool:
        return self.is_integer and self.as_int % 2 == 1

    def __float__(self) -> float:
        return float(self.value)

    def __abs__(self) -> "Exponent":
        return Exponent(abs(self.value))

    def __neg__(self) -> "Exponent":
        return Exponent(-self.value)

    def shifted(self, delta: int) -> "Exponent":
        return Exponent(self.value + delta)

    def to_json(self) -> Union[int, float, str]:
        """JSON 表示：整数输出 int，精确非整数输出 "a/b"，浮点输出 float"""
        if isinstance(self.value, Fraction):
            if self.value.denominator == 1:
                return self.value.numerator
            return format_scalar(self.value)
        return float(self.value)

    def __str__(self) -> str:
        return format_scalar(self.value)


# ---------------------------------------------------------------- 惯性指数

@dataclass(frozen=True)
class Inertia:
    """惯性指数 (π, ζ, ν)：正、零、负特征值个数"""

    pi: int
    zeta: int
    nu: int

    def __post_init__(self):
        if min(self.pi, self.zeta, self.nu) < 0:
            raise ValidationError(f"惯性指数分量不能为负: {self.as_tuple()}")

    @property
    def order(self) -> int:
        return self.pi + self.zeta + self.nu

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.pi, self.zeta, self.nu)

    def to_list(self) -> List[int]:
        return [self.pi, self.zeta, self.nu]

    def __add__(self, other: "Inertia") -> "Inertia":
        return Inertia(self.pi + other.pi, self.zeta + other.zeta, self.nu + other.nu)

    def __str__(self) -> str:
        return f"({self.pi},{self.zeta},{self.nu})"


def inertia_sum_check(inertia: Inertia, n: int) -> bool:
    """π + ζ + ν 是否等于矩阵阶数"""
    return inertia.pi + inertia.zeta + inertia.nu == n


# ---------------------------------------------------------------- 矩阵族描述

class Family(Enum):
    """矩阵族"""
    KWONG = "kwong"
    LOEWNER = "loewner"
    POWER_ABS_DIFF = "absdiff"
    COSH_KWONG = "cosh"
    CAUCHY = "cauchy"
    CROSS_KWONG = "cross"
    POWER_SUM = "powersum"

    @property
    def label(self) -> str:
        return _FAMILY_LABELS[self]

    @classmethod
    def parse(cls, text: Union[str, "Family"]) -> "Family":
        if isinstance(text, Family):
            return text
        key = text.strip().lower()
        for family in cls:
            if key in (family.value, family.label.lower()):
                return family
        raise ValidationError(f"未知矩阵族: {text}")


_FAMILY_LABELS = {
    Family.KWONG: "Kwong",
    Family.LOEWNER: "Loewner",
    Family.POWER_ABS_DIFF: "PowerAbsDiff",
    Family.COSH_KWONG: "CoshKwong",
    Family.CAUCHY: "Cauchy",
    Family.CROSS_KWONG: "CrossKwong",
    Family.POWER_SUM: "PowerSum",
}


@dataclass(frozen=True)
class FamilySpec:
    """
    矩阵族描述：构造哪一族、在哪些节点上、取什么指数

    CoshKwong 族的 points 为原始节点 p_i，构造时取 x_i = ln(p_i)/2
    """

    family: Family
    points: Points
    r: Optional[Exponent] = None
    second_points: Optional[Points] = None

    def __post_init__(self):
        if (self.second_points is not None) != (self.family is Family.CROSS_KWONG):
            raise ValidationError("second_points 仅且必须用于 CrossKwong 族")
        if self.family is Family.CROSS_KWONG and len(self.second_points) != len(self.points):
            raise LengthMismatchError(
                f"两组节点长度不一致: {len(self.points)} != {len(self.second_points)}"
            )
        if self.r is None and self.family is not Family.CAUCHY:
            raise ValidationError(f"{self.family.label} 族需要指数 r")

    @property
    def n(self) -> int:
        return self.points.n

    def with_r(self, r: Any) -> "FamilySpec":
        return FamilySpec(self.family, self.points, Exponent.of(r), self.second_points)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "family": self.family.label,
            "points": [format_scalar(v) for v in self.points],
            "r": self.r.to_json() if self.r is not None else None,
        }
        if self.second_points is not None:
            data["secondPoints"] = [format_scalar(v) for v in self.second_points]
        return data


# ---------------------------------------------------------------- 矩阵

def _infer_mode(entries: Sequence[Any], mode: Optional[ScalarMode]) -> ScalarMode:
    if mode is not None:
        return mode
    exact_flags = [is_exact_scalar(e) for e in entries]
    if all(exact_flags):
        return ScalarMode.EXACT
    if not any(exact_flags) or all(isinstance(e, (float, np.floating)) for e in entries):
        return ScalarMode.FLOAT
    raise ScalarModeMismatchError("矩阵元素混用了精确与浮点标量")


def _convert(entry: Any, mode: ScalarMode) -> Scalar:
    return to_exact(entry) if mode is ScalarMode.EXACT else to_float(entry)


@dataclass(frozen=True)
class SymMatrix:
    """
    稠密实对称矩阵，仅存储下三角

    lower[i] 含 i+1 个元素 (i,0..i)
    """

    lower: Tuple[Tuple[Scalar, ...], ...]
    mode: ScalarMode
    provenance: Optional[FamilySpec] = field(default=None, compare=False)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], mode: Optional[ScalarMode] = None,
                  provenance: Optional[FamilySpec] = None,
                  check_symmetry: bool = True) -> "SymMatrix":
        """由完整方阵构造，默认校验对称性"""
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise LengthMismatchError("对称矩阵必须为方阵")
        flat = [entry for row in rows for entry in row]
        mode = _infer_mode(flat, mode)
        converted = [[_convert(entry, mode) for entry in row] for row in rows]
        if check_symmetry:
            scale = max((abs(e) for e in flat_values(converted)), default=0)
            for i in range(n):
                for j in range(i):
                    diff = abs(converted[i][j] - converted[j][i])
                    if mode is ScalarMode.EXACT and diff != 0:
                        raise ValidationError(f"矩阵不对称: ({i},{j})")
                    if mode is ScalarMode.FLOAT and diff > 1e-12 * scale:
                        raise ValidationError(f"矩阵不对称: ({i},{j})")
        lower = tuple(tuple(converted[i][: i + 1]) for i in range(n))
        return cls(lower, mode, provenance)

    @classmethod
    def from_numpy(cls, array: np.ndarray, provenance: Optional[FamilySpec] = None) -> "SymMatrix":
        array = np.asarray(array, dtype=float)
        lower = tuple(tuple(float(array[i, j]) for j in range(i + 1)) for i in range(array.shape[0]))
        return cls(lower, ScalarMode.FLOAT, provenance)

    @property
    def order(self) -> int:
        return len(self.lower)

    @property
    def is_exact(self) -> bool:
        return self.mode is ScalarMode.EXACT

    def entry(self, i: int, j: int) -> Scalar:
        return self.lower[i][j] if j <= i else self.lower[j][i]

    def rows(self) -> List[List[Scalar]]:
        n = self.order
        return [[self.entry(i, j) for j in range(n)] for i in range(n)]

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(e) for e in row] for row in self.rows()], dtype=float).reshape(
            self.order, self.order
        )

    def to_float(self) -> "SymMatrix":
        if not self.is_exact:
            return self
        lower = tuple(tuple(float(e) for e in row) for row in self.lower)
        return SymMatrix(lower, ScalarMode.FLOAT, self.provenance)

    def principal_submatrix(self, indices: Sequence[int]) -> "SymMatrix":
        rows = [[self.entry(i, j) for j in indices] for i in indices]
        return SymMatrix.from_rows(rows, self.mode, check_symmetry=False)

    def permuted(self, perm: Sequence[int]) -> "SymMatrix":
        """PᵀMP，新矩阵 (i,j) 元为 M[perm[i], perm[j]]"""
        if sorted(perm) != list(range(self.order)):
            raise ValidationError(f"不是有效置换: {list(perm)}")
        return self.principal_submatrix(perm)

    def __str__(self) -> str:
        return f"SymMatrix(order={self.order}, mode={self.mode.value})"


def flat_values(rows: Sequence[Sequence[Scalar]]) -> List[Scalar]:
    return [entry for row in rows for entry in row]


@dataclass(frozen=True)
class GeneralMatrix:
    """一般稠密矩阵（交叉 Kwong 矩阵、Vandermonde 因子、子空间基等）"""

    data: Tuple[Tuple[Scalar, ...], ...]
    mode: ScalarMode

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], mode: Optional[ScalarMode] = None) -> "GeneralMatrix":
        if rows and any(len(row) != len(rows[0]) for row in rows):
            raise LengthMismatchError("矩阵各行长度不一致")
        mode = _infer_mode(flat_values(rows), mode)
        return cls(tuple(tuple(_convert(e, mode) for e in row) for row in rows), mode)

    @property
    def nrows(self) -> int:
        return len(self.data)

    @property
    def ncols(self) -> int:
        return len(self.data[0]) if self.data else 0

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def is_exact(self) -> bool:
        return self.mode is ScalarMode.EXACT

    def entry(self, i: int, j: int) -> Scalar:
        return self.data[i][j]

    def rows(self) -> List[List[Scalar]]:
        return [list(row) for row in self.data]

    def transpose(self) -> "GeneralMatrix":
        return GeneralMatrix(tuple(zip(*self.data)), self.mode) if self.data else self

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(e) for e in row] for row in self.data], dtype=float).reshape(self.shape)
