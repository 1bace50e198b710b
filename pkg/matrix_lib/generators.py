"""
矩阵族生成器
============

构造 Kwong、Loewner、幂绝对差、cosh 形式、Cauchy、交叉 Kwong、幂和矩阵
以及 Vandermonde 因子分解所需的 (W, V) 对。
有理节点与整数指数时按精确有理数构造，其余情况按 binary64 构造。

Author: KwongLab Team
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Union

import numpy as np

from core.domain import (
    Exponent,
    Family,
    FamilySpec,
    GeneralMatrix,
    Points,
    ScalarMode,
    SymMatrix,
)
from core.exceptions import (
    BadExponentError,
    DuplicatePointError,
    ExactModeUnsupportedError,
    LengthMismatchError,
    NonpositiveExponentError,
    ValidationError,
)

ExponentLike = Union[Exponent, int, float, Fraction, str]


@dataclass(frozen=True)
class VandermondePair:
    """K_r = WᵀVW 的因子：W 为 r×n Vandermonde 矩阵，V 为 r×r 反对角矩阵"""

    W: GeneralMatrix
    V: SymMatrix


def _resolve_mode(points: Points, r: Optional[Exponent], mode: Optional[ScalarMode]) -> ScalarMode:
    exact_ok = points.is_exact and (r is None or (r.is_exact and r.is_integer))
    if mode is ScalarMode.EXACT and not exact_ok:
        if not points.is_exact:
            raise ExactModeUnsupportedError("精确模式需要有理节点")
        raise ExactModeUnsupportedError(f"精确模式仅支持整数指数: r={r}")
    if mode is None:
        return ScalarMode.EXACT if exact_ok else ScalarMode.FLOAT
    return mode


def _exact_powers(points: Points, r: Exponent) -> List[Fraction]:
    k = r.as_int
    return [p ** k for p in points]


def _sym_from_lower_fn(n: int, fn, mode: ScalarMode, spec: FamilySpec) -> SymMatrix:
    lower = tuple(tuple(fn(i, j) for j in range(i + 1)) for i in range(n))
    return SymMatrix(lower, mode, spec)


def _sym_from_array(array: np.ndarray, spec: FamilySpec) -> SymMatrix:
    if not np.all(np.isfinite(array)):
        raise ValidationError(f"{spec.family.label} 矩阵元素溢出为非有限值")
    return SymMatrix.from_numpy(array, provenance=spec)


def gen_kwong(points: Points, r: ExponentLike, mode: Optional[ScalarMode] = None) -> SymMatrix:
    """
    Kwong 矩阵 K_r = [(p_i^r + p_j^r)/(p_i + p_j)]

    Args:
        points: 节点
        r: 指数；负整数在精确模式下通过有理倒数精确计算
        mode: 强制标量模式，None 为自动

    Returns:
        K_r
    """
    r = Exponent.of(r)
    mode = _resolve_mode(points, r, mode)
    spec = FamilySpec(Family.KWONG, points, r)
    if mode is ScalarMode.EXACT:
        p = list(points)
        pr = _exact_powers(points, r)
        return _sym_from_lower_fn(points.n, lambda i, j: (pr[i] + pr[j]) / (p[i] + p[j]), mode, spec)
    p = points.as_floats()
    pr = p ** float(r)
    return _sym_from_array((pr[:, None] + pr[None, :]) / (p[:, None] + p[None, :]), spec)


def gen_cauchy(points: Points, mode: Optional[ScalarMode] = None) -> SymMatrix:
    """Cauchy 矩阵 [2/(p_i + p_j)]，与 gen_kwong(points, 0) 逐元素相等"""
    mode = _resolve_mode(points, None, mode)
    spec = FamilySpec(Family.CAUCHY, points, Exponent.of(0))
    if mode is ScalarMode.EXACT:
        p = list(points)
        return _sym_from_lower_fn(points.n, lambda i, j: Fraction(2) / (p[i] + p[j]), mode, spec)
    p = points.as_floats()
    return _sym_from_array(2.0 / (p[:, None] + p[None, :]), spec)


def gen_loewner(points: Points, r: ExponentLike, mode: Optional[ScalarMode] = None) -> SymMatrix:
    """
    Loewner 矩阵 L_r = [(p_i^r - p_j^r)/(p_i - p_j)]

    对角线取导数极限 r·p_i^{r-1}
    """
    r = Exponent.of(r)
    mode = _resolve_mode(points, r, mode)
    spec = FamilySpec(Family.LOEWNER, points, r)
    if mode is ScalarMode.EXACT:
        p = list(points)
        k = r.as_int
        pr = _exact_powers(points, r)

        def entry(i, j):
            if i == j:
                return k * p[i] ** (k - 1)
            return (pr[i] - pr[j]) / (p[i] - p[j])

        return _sym_from_lower_fn(points.n, entry, mode, spec)

    p = points.as_floats()
    rf = float(r)
    pr = p ** rf
    diff = p[:, None] - p[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        array = (pr[:, None] - pr[None, :]) / diff
    np.fill_diagonal(array, rf * p ** (rf - 1.0))
    return _sym_from_array(array, spec)


def gen_power_absdiff(points: Points, r: ExponentLike, mode: Optional[ScalarMode] = None) -> SymMatrix:
    """
    幂绝对差矩阵 B_r = [|p_i - p_j|^r]，对角线为 0

    Raises:
        NonpositiveExponentError: r ≤ 0（0^0 约定不明确）
    """
    r = Exponent.of(r)
    if r.value <= 0:
        raise NonpositiveExponentError(f"B_r 需要 r > 0: r={r}")
    mode = _resolve_mode(points, r, mode)
    spec = FamilySpec(Family.POWER_ABS_DIFF, points, r)
    if mode is ScalarMode.EXACT:
        p = list(points)
        k = r.as_int
        return _sym_from_lower_fn(points.n, lambda i, j: abs(p[i] - p[j]) ** k, mode, spec)
    p = points.as_floats()
    return _sym_from_array(np.abs(p[:, None] - p[None, :]) ** float(r), spec)


def cosh_ratio(delta: np.ndarray, r: float) -> np.ndarray:
    """
    cosh(r·δ)/cosh(δ)，按 exp(|rδ| - |δ|)·(1+e^{-2|rδ|})/(1+e^{-2|δ|}) 计算以避免溢出
    """
    a = np.abs(r * delta)
    b = np.abs(delta)
    return np.exp(a - b) * (1.0 + np.exp(-2.0 * a)) / (1.0 + np.exp(-2.0 * b))


def gen_cosh_kwong(xs: Sequence[float], r: ExponentLike,
                   provenance: Optional[FamilySpec] = None) -> SymMatrix:
    """
    cosh 形式 K̃_r = [cosh(r(x_i - x_j))/cosh(x_i - x_j)]，仅浮点模式

    Args:
        xs: 互异实数
        r: 指数
        provenance: 来源描述（由节点构造时传入）
    """
    x = np.asarray([float(v) for v in xs], dtype=float)
    if len(set(x.tolist())) != len(x):
        raise DuplicatePointError("cosh 形式的 x_i 必须互异")
    r = Exponent.of(r)
    array = cosh_ratio(x[:, None] - x[None, :], float(r))
    np.fill_diagonal(array, 1.0)
    return SymMatrix.from_numpy(array, provenance=provenance)


def cosh_nodes(points: Points) -> np.ndarray:
    """x_i = ln(p_i)/2"""
    return np.log(points.as_floats()) / 2.0


def cosh_congruence_diag(points: Points, r: ExponentLike) -> np.ndarray:
    """K_r = Δ K̃_r Δ 中的 Δ 对角元 e^{(r-1)x_i}"""
    return np.exp((float(Exponent.of(r)) - 1.0) * cosh_nodes(points))


def gen_cosh_kwong_from_points(points: Points, r: ExponentLike) -> SymMatrix:
    r = Exponent.of(r)
    return gen_cosh_kwong(cosh_nodes(points), r, FamilySpec(Family.COSH_KWONG, points, r))


def gen_cross_kwong(p: Points, q: Points, r: ExponentLike,
                    mode: Optional[ScalarMode] = None) -> GeneralMatrix:
    """
    交叉 Kwong 矩阵 [(p_i^r + q_j^r)/(p_i + q_j)]，一般不对称

    Raises:
        LengthMismatchError: p、q 长度不同
    """
    if len(p) != len(q):
        raise LengthMismatchError(f"两组节点长度不一致: {len(p)} != {len(q)}")
    r = Exponent.of(r)
    exact_ok = p.is_exact and q.is_exact and r.is_exact and r.is_integer
    if mode is ScalarMode.EXACT and not exact_ok:
        raise ExactModeUnsupportedError("精确模式需要有理节点与整数指数")
    if mode is None:
        mode = ScalarMode.EXACT if exact_ok else ScalarMode.FLOAT

    if mode is ScalarMode.EXACT:
        k = r.as_int
        rows = [[(pi ** k + qj ** k) / (pi + qj) for qj in q] for pi in p]
        return GeneralMatrix(tuple(tuple(row) for row in rows), mode)

    pf, qf = p.as_floats(), q.as_floats()
    rf = float(r)
    array = (pf[:, None] ** rf + qf[None, :] ** rf) / (pf[:, None] + qf[None, :])
    return GeneralMatrix(tuple(tuple(float(e) for e in row) for row in array), mode)


def gen_power_sum(points: Points, r: ExponentLike, mode: Optional[ScalarMode] = None) -> SymMatrix:
    """幂和矩阵 P_r = [(p_i + p_j)^r]"""
    r = Exponent.of(r)
    mode = _resolve_mode(points, r, mode)
    spec = FamilySpec(Family.POWER_SUM, points, r)
    if mode is ScalarMode.EXACT:
        p = list(points)
        k = r.as_int
        return _sym_from_lower_fn(points.n, lambda i, j: (p[i] + p[j]) ** k, mode, spec)
    p = points.as_floats()
    return _sym_from_array((p[:, None] + p[None, :]) ** float(r), spec)


def _vandermonde_rows(points: Points, k: int) -> GeneralMatrix:
    if points.is_exact:
        rows = [[pj ** t for pj in points] for t in range(k)]
        return GeneralMatrix(tuple(tuple(row) for row in rows), ScalarMode.EXACT)
    pf = points.as_floats()
    rows = [[float(pj ** t) for pj in pf] for t in range(k)]
    return GeneralMatrix(tuple(tuple(row) for row in rows), ScalarMode.FLOAT)


def _antidiagonal(k: int, signs: Sequence[int], mode: ScalarMode) -> SymMatrix:
    one = Fraction if mode is ScalarMode.EXACT else float
    rows = [[one(0)] * k for _ in range(k)]
    for i in range(k):
        rows[i][k - 1 - i] = one(signs[i])
    return SymMatrix.from_rows(rows, mode)


def _integer_order(r: Any, n: int, odd: bool) -> int:
    r = Exponent.of(r)
    if not r.is_integer:
        raise BadExponentError(f"指数必须为整数: r={r}")
    k = r.as_int
    if k < 1 or k > n or (odd and k % 2 == 0):
        kind = "奇数" if odd else "整数"
        raise BadExponentError(f"需要 1 ≤ r ≤ n 的{kind}: r={k}, n={n}")
    return k


def gen_vandermonde_pair(points: Points, r: ExponentLike) -> VandermondePair:
    """
    K_r = WᵀVW 分解（r 为奇数，1 ≤ r ≤ n）

    W 的第 t 行为 (p_j^t)，t = 0..r-1；V 的反对角元为 (1, -1, ..., -1, 1)

    Raises:
        BadExponentError: r 为偶数、r > n 或 r < 1
    """
    k = _integer_order(r, points.n, odd=True)
    W = _vandermonde_rows(points, k)
    V = _antidiagonal(k, [(-1) ** i for i in range(k)], W.mode)
    return VandermondePair(W, V)


def gen_loewner_vandermonde_pair(points: Points, k: ExponentLike) -> VandermondePair:
    """
    L_k = WᵀJW 分解（1 ≤ k ≤ n），J 为全 1 反对角矩阵
    """
    k = _integer_order(k, points.n, odd=False)
    W = _vandermonde_rows(points, k)
    return VandermondePair(W, _antidiagonal(k, [1] * k, W.mode))


def build_matrix(spec: FamilySpec, mode: Optional[ScalarMode] = None) -> Union[SymMatrix, GeneralMatrix]:
    """按 FamilySpec 构造矩阵"""
    family = spec.family
    if family is Family.KWONG:
        return gen_kwong(spec.points, spec.r, mode)
    if family is Family.LOEWNER:
        return gen_loewner(spec.points, spec.r, mode)
    if family is Family.POWER_ABS_DIFF:
        return gen_power_absdiff(spec.points, spec.r, mode)
    if family is Family.COSH_KWONG:
        if mode is ScalarMode.EXACT:
            raise ExactModeUnsupportedError("cosh 形式仅支持浮点模式")
        return gen_cosh_kwong_from_points(spec.points, spec.r)
    if family is Family.CAUCHY:
        return gen_cauchy(spec.points, mode)
    if family is Family.CROSS_KWONG:
        return gen_cross_kwong(spec.points, spec.second_points, spec.r, mode)
    if family is Family.POWER_SUM:
        return gen_power_sum(spec.points, spec.r, mode)
    raise ValidationError(f"未知矩阵族: {family}")


def can_build_exact(spec: FamilySpec) -> bool:
    """是否可按精确模式构造"""
    if spec.family is Family.COSH_KWONG or not spec.points.is_exact:
        return False
    if spec.second_points is not None and not spec.second_points.is_exact:
        return False
    if spec.family is Family.CAUCHY:
        return True
    return spec.r.is_exact and spec.r.is_integer and not (
        spec.family is Family.POWER_ABS_DIFF and spec.r.value <= 0
    )


def scale_factor(c: Any, r: ExponentLike) -> Union[Fraction, float]:
    """均匀缩放 p → c·p 时 K_r 的整体因子 c^{r-1}"""
    r = Exponent.of(r)
    if r.is_exact and r.is_integer and isinstance(c, (int, Fraction)):
        return Fraction(c) ** (r.as_int - 1)
    return math.pow(float(c), float(r) - 1.0)
