"""
符号分析
========

辅助函数 f(x) = Σ c_j (x^r + p_j^r)/(x + p_j) 的 Descartes 符号计数与正零点扫描、
交叉 Kwong 矩阵非奇异性检查、严格符号正则 (SSR) 子式枚举。

Author: KwongLab Team
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.polynomial.polynomial as poly
from mpmath import mp
from scipy.optimize import bisect

from core.config_manager import get_setting
from core.domain import Exponent, GeneralMatrix, Points, SymMatrix, is_exact_scalar
from core.exceptions import (
    AllZeroWeightsError,
    ExactModeUnsupportedError,
    LengthMismatchError,
    OrderTooLargeError,
    PreconditionViolatedError,
    ValidationError,
)
from framework.exact_engine import determinant_exact, minor_exact

from .generators import gen_cross_kwong

logger = logging.getLogger(__name__)


def sign_changes(seq: Sequence[Any], deadband: Optional[float] = None) -> int:
    """
    删去零后严格符号交替的次数

    精确序列按真零处理；浮点序列把 |x| < deadband·max|seq| 视为零
    """
    values = list(seq)
    if not values:
        return 0
    if all(is_exact_scalar(v) for v in values):
        nonzero = [Fraction(v) for v in values if Fraction(v) != 0]
    else:
        deadband = get_setting("signs.zero_deadband", 1e-12) if deadband is None else deadband
        floats = [float(v) for v in values]
        scale = max(abs(v) for v in floats)
        nonzero = [v for v in floats if abs(v) >= deadband * scale and v != 0.0]
    signs = [1 if v > 0 else -1 for v in nonzero]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


@dataclass(frozen=True)
class GeneralizedPolyCoeffs:
    """α_0..α_{n−1}（多项式块）与 β_0..β_{n−1}（x^r 块），升幂"""

    alpha: Tuple[Any, ...]
    beta: Tuple[Any, ...]
    r: Exponent

    @property
    def combined(self) -> Tuple[Any, ...]:
        return tuple(self.alpha) + tuple(self.beta)

    def sign_sequence(self) -> Tuple[Any, ...]:
        """
        用于计数符号变化的序列

        浮点系数按块各自归一化，两块量级相差 p^r 倍，统一阈值会误删 β 块
        """
        if all(is_exact_scalar(v) for v in self.combined):
            return self.combined
        blocks = []
        for block in (self.alpha, self.beta):
            values = np.asarray([float(v) for v in block])
            scale = float(np.max(np.abs(values))) if len(values) else 0.0
            blocks.extend((values / scale).tolist() if scale > 0 else values.tolist())
        return tuple(blocks)

    @property
    def ordered(self) -> bool:
        """r > n−1 时两块指数不相交且有序"""
        return float(self.r) > len(self.alpha) - 1


def _validate_weights(points: Points, c: Sequence[Any]) -> List[Any]:
    weights = list(c)
    if len(weights) != points.n:
        raise LengthMismatchError(f"权重个数 {len(weights)} 与节点个数 {points.n} 不一致")
    if all(float(w) == 0 for w in weights):
        raise AllZeroWeightsError("权重不能全为零")
    return weights


def _exact_poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _lagrange_blocks(points: Points, c: Sequence[Any], r: Exponent, sign: int):
    """
    h1 = Σ c_i ∏_{j≠i}(x + sign·p_j)，h2 = Σ c_i p_i^r ∏_{j≠i}(x + sign·p_j)，升幂系数
    """
    n = points.n
    exact = points.is_exact and r.is_exact and r.is_integer and all(is_exact_scalar(w) for w in c)
    if exact:
        p = list(points)
        k = r.as_int
        h1 = [Fraction(0)] * n
        h2 = [Fraction(0)] * n
        for i in range(n):
            prod = [Fraction(1)]
            for j in range(n):
                if j != i:
                    prod = _exact_poly_mul(prod, [sign * p[j], Fraction(1)])
            ci = Fraction(c[i])
            weight = ci * p[i] ** k
            for t in range(n):
                h1[t] += ci * prod[t]
                h2[t] += weight * prod[t]
        return tuple(h1), tuple(h2)

    p = points.as_floats()
    rf = float(r)
    h1 = np.zeros(n)
    h2 = np.zeros(n)
    for i in range(n):
        others = np.delete(p, i)
        prod = poly.polyfromroots(-sign * others) if n > 1 else np.array([1.0])
        h1 += float(c[i]) * prod
        h2 += float(c[i]) * p[i] ** rf * prod
    return tuple(h1.tolist()), tuple(h2.tolist())


def build_g_coeffs(points: Points, c: Sequence[Any], r: Any) -> GeneralizedPolyCoeffs:
    """
    g(x) = f(x)·∏(x + p_j) = x^r·h1(x) + h2(x) 的系数

    Returns:
        beta 为 h1 的系数，alpha 为 h2 = Σ c_i p_i^r ∏_{j≠i}(x + p_j) 的系数

    Raises:
        AllZeroWeightsError: 权重全零
    """
    r = Exponent.of(r)
    weights = _validate_weights(points, c)
    h1, h2 = _lagrange_blocks(points, weights, r, sign=1)
    return GeneralizedPolyCoeffs(alpha=h2, beta=h1, r=r)


def build_g0_coeffs(points: Points, c: Sequence[Any], r: Any) -> GeneralizedPolyCoeffs:
    """
    g0(x) = Σ c_i (x^r − p_i^r)/(x − p_i) · ∏(x − p_j) = x^r·h̃1(x) + h̃2(x)

    h̃1 = Σ c_i ∏_{j≠i}(x − p_j)，h̃2 = −Σ c_i p_i^r ∏_{j≠i}(x − p_j)，按定义展开
    """
    r = Exponent.of(r)
    weights = _validate_weights(points, c)
    h1, h2 = _lagrange_blocks(points, weights, r, sign=-1)
    return GeneralizedPolyCoeffs(alpha=tuple(-v for v in h2), beta=h1, r=r)


def _check_descartes_preconditions(points: Points, r: Exponent):
    n = points.n
    if n % 2 == 0:
        raise PreconditionViolatedError(f"需要 n 为奇数: n={n}")
    if not float(r) > n - 1:
        raise PreconditionViolatedError(f"需要 r > n−1: r={r}, n={n}")


def descartes_zero_bound(points: Points, c: Sequence[Any], r: Any) -> int:
    """
    s = (α_0..α_{n−1}, β_0..β_{n−1}) 的符号变化数，f 的正零点个数上界

    Raises:
        PreconditionViolatedError: n 为偶数或 r ≤ n−1
    """
    r = Exponent.of(r)
    _check_descartes_preconditions(points, r)
    return sign_changes(build_g_coeffs(points, c, r).sign_sequence())


def companion_sign_changes(points: Points, c: Sequence[Any], r: Any) -> int:
    """g0 系数序列的符号变化数 s0"""
    r = Exponent.of(r)
    _check_descartes_preconditions(points, r)
    return sign_changes(build_g0_coeffs(points, c, r).sign_sequence())


@dataclass(frozen=True)
class ZeroScan:
    """f 在 (0, ∞) 上的数值零点（个数为真实零点数的下界）"""
    count: int
    roots: Tuple[float, ...]
    x_min: float
    x_max: float


def evaluate_f(points: Points, c: Sequence[Any], r: Any, x: np.ndarray) -> np.ndarray:
    """f(x) = Σ c_j (x^r + p_j^r)/(x + p_j)"""
    p = points.as_floats()
    w = np.array([float(v) for v in c])
    rf = float(Exponent.of(r))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return ((x[:, None] ** rf + p[None, :] ** rf) / (x[:, None] + p[None, :])) @ w


def count_positive_zeros_f(points: Points, c: Sequence[Any], r: Any,
                           scan_samples: Optional[int] = None) -> ZeroScan:
    """
    在对数网格 [min(p)·10⁻³, 100·max(p)] 上找 f 的变号区间并二分求根

    Args:
        points: 节点
        c: 权重
        r: 指数
        scan_samples: 网格点数，默认 4096
    """
    weights = _validate_weights(points, c)
    samples = get_setting("signs.scan_samples", 4096) if scan_samples is None else scan_samples
    rtol = get_setting("signs.bisect_rtol", 1e-12)
    p = points.as_floats()
    x_min, x_max = float(p.min()) * 1e-3, float(p.max()) * 100.0
    grid = np.geomspace(x_min, x_max, int(samples))
    values = evaluate_f(points, weights, r, grid)

    def f_scalar(x: float) -> float:
        return float(evaluate_f(points, weights, r, np.array([x]))[0])

    roots: List[float] = []
    for k in range(len(grid) - 1):
        a, b = values[k], values[k + 1]
        if a == 0.0:
            roots.append(float(grid[k]))
        elif a * b < 0.0:
            roots.append(float(bisect(f_scalar, grid[k], grid[k + 1], rtol=rtol)))
    if values[-1] == 0.0:
        roots.append(float(grid[-1]))
    return ZeroScan(len(roots), tuple(roots), x_min, x_max)


@dataclass(frozen=True)
class NonsingularCheck:
    """交叉 Kwong 矩阵非奇异性"""
    nonsingular: bool
    determinant: Union[Fraction, float]
    bound: float
    method: str


def cross_kwong_nonsingular(p: Points, q: Points, r: Any) -> NonsingularCheck:
    """
    交叉 Kwong 矩阵是否非奇异

    整数 r 与有理节点时用精确行列式；否则在 50 位精度下计算行列式，
    |det| > det_floor × Hadamard 上界 时判为非奇异
    """
    r = Exponent.of(r)
    if len(p) != len(q):
        raise LengthMismatchError(f"两组节点长度不一致: {len(p)} != {len(q)}")
    if p.is_exact and q.is_exact and r.is_exact and r.is_integer:
        det = determinant_exact(gen_cross_kwong(p, q, r))
        return NonsingularCheck(det != 0, det, 0.0, "exact")

    dps = get_setting("signs.mp_dps", 50)
    floor = get_setting("signs.det_floor", 1e-30)
    with mp.workdps(dps):
        rr = mp.mpf(float(r))
        pm = [mp.mpf(float(v)) for v in p]
        qm = [mp.mpf(float(v)) for v in q]
        m = mp.matrix([[(a ** rr + b ** rr) / (a + b) for b in qm] for a in pm])
        det = mp.det(m)
        bound = mp.fprod(mp.sqrt(mp.fsum(m[i, j] ** 2 for j in range(m.cols))) for i in range(m.rows))
        nonsingular = abs(det) > mp.mpf(floor) * bound
        return NonsingularCheck(bool(nonsingular), float(det), float(bound), "mpmath")


@dataclass(frozen=True)
class MinorWitness:
    """子式下标（从 0 开始）与取值"""
    rows: Tuple[int, ...]
    cols: Tuple[int, ...]
    value: Fraction

    def to_dict(self):
        return {"rows": list(self.rows), "cols": list(self.cols), "value": str(self.value)}


@dataclass(frozen=True)
class OrderVerdict:
    """单个阶数 k 的结论：符号一致或违例"""
    k: int
    uniform: bool
    sign: int = 0
    witnesses: Tuple[MinorWitness, ...] = ()

    def to_dict(self):
        if self.uniform:
            return {"k": self.k, "verdict": "SignUniform", "sign": self.sign}
        return {"k": self.k, "verdict": "Violation", "witnesses": [w.to_dict() for w in self.witnesses]}


@dataclass
class SSRReport:
    """SSR_m 分类"""
    max_order: int
    orders: List[OrderVerdict] = field(default_factory=list)

    @property
    def is_ssr(self) -> bool:
        return len(self.orders) == self.max_order and all(v.uniform for v in self.orders)

    def to_dict(self):
        return {"maxOrder": self.max_order, "ssr": self.is_ssr,
                "orders": [v.to_dict() for v in self.orders]}


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


def ssr_check(matrix: Union[SymMatrix, GeneralMatrix], max_order: int,
              fail_fast: bool = False) -> SSRReport:
    """
    逐阶枚举 k×k 子式（字典序），判断是否全部非零且同号

    违例见证为首个子式与首个与之异号（或为零）的子式；首个子式为零时仅给出它

    Raises:
        OrderTooLargeError: 维数超过 8
    """
    if not matrix.is_exact:
        raise ExactModeUnsupportedError("SSR 检查需要精确矩阵")
    nrows, ncols = (matrix.order, matrix.order) if isinstance(matrix, SymMatrix) else matrix.shape
    limit = get_setting("signs.max_ssr_order", 8)
    if max(nrows, ncols) > limit:
        raise OrderTooLargeError(f"矩阵维数 {max(nrows, ncols)} 超过 {limit}")
    if not 1 <= max_order <= min(nrows, ncols):
        raise ValidationError(f"需要 1 ≤ m ≤ {min(nrows, ncols)}: m={max_order}")

    report = SSRReport(max_order)
    for k in range(1, max_order + 1):
        verdict = None
        first: Optional[MinorWitness] = None
        for rows in itertools.combinations(range(nrows), k):
            for cols in itertools.combinations(range(ncols), k):
                value = minor_exact(matrix, rows, cols)
                witness = MinorWitness(rows, cols, value)
                if first is None:
                    first = witness
                    if value == 0:
                        verdict = OrderVerdict(k, False, witnesses=(witness,))
                        break
                    continue
                if _sign(value) != _sign(first.value):
                    verdict = OrderVerdict(k, False, witnesses=(first, witness))
                    break
            if verdict is not None:
                break
        if verdict is None:
            verdict = OrderVerdict(k, True, sign=_sign(first.value))
        report.orders.append(verdict)
        logger.debug(f"SSR 阶数 {k}: {'一致' if verdict.uniform else '违例'}")
        if fail_fast and not verdict.uniform:
            break
    return report


@dataclass(frozen=True)
class CrossSignResult:
    """2×2 交叉 Kwong 行列式符号；hypothesis_holds 表示两组节点是否有公共元"""
    sign: int
    hypothesis_holds: bool
    determinant: Union[Fraction, float]


def cross_2x2_det_sign(p: Points, q: Points, r: Any) -> CrossSignResult:
    """
    2×2 交叉 Kwong 矩阵行列式的符号

    节点不相交时仍返回计算出的符号，hypothesis_holds 为 False
    """
    if len(p) != 2 or len(q) != 2:
        raise LengthMismatchError("需要两组长度为 2 的节点")
    r = Exponent.of(r)
    hypothesis = bool(set(float(v) for v in p) & set(float(v) for v in q))
    if not hypothesis:
        logger.warning("⚠️ 两组节点不相交，符号结论不在适用范围内")
    if p.is_exact and q.is_exact and r.is_exact and r.is_integer:
        det = determinant_exact(gen_cross_kwong(p, q, r))
        return CrossSignResult(_sign(det), hypothesis, det)
    with mp.workdps(get_setting("signs.mp_dps", 50)):
        rr = mp.mpf(float(r))
        a = [[(mp.mpf(float(x)) ** rr + mp.mpf(float(y)) ** rr) / (mp.mpf(float(x)) + mp.mpf(float(y)))
              for y in q] for x in p]
        det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
        return CrossSignResult(int(mp.sign(det)), hypothesis, float(det))
