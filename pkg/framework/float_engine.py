"""
浮点惯性引擎
对称特征值求解（小阶循环 Jacobi，大阶 LAPACK）与零特征值判定策略
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np
import scipy.linalg

from core.config_manager import get_setting
from core.domain import Family, FamilySpec, Inertia, SymMatrix
from core.exceptions import (
    AmbiguousNullityError,
    NoConvergenceError,
    ScalarModeMismatchError,
    ValidationError,
)

logger = logging.getLogger(__name__)

EPS = float(np.finfo(float).eps)


class ConditioningRoute(Enum):
    """条件化路线"""
    DIRECT = "direct"
    COSH = "cosh-congruence"


class RoutePolicy(Enum):
    """路线选择策略"""
    DIRECT = "direct"
    COSH = "cosh-congruence"
    AUTO = "auto"

    @classmethod
    def parse(cls, value: Union[str, "RoutePolicy"]) -> "RoutePolicy":
        if isinstance(value, RoutePolicy):
            return value
        aliases = {"cosh": cls.COSH}
        key = str(value).strip().lower()
        if key in aliases:
            return aliases[key]
        for policy in cls:
            if policy.value == key:
                return policy
        raise ValidationError(f"未知路线策略: {value}")


@dataclass(frozen=True)
class SpectrumReport:
    """谱分类报告"""

    eigenvalues: tuple
    zero_threshold: float
    inertia: Inertia
    gap_ratio: float
    conditioning_route: ConditioningRoute = ConditioningRoute.DIRECT
    converged: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "zeroThreshold": float(self.zero_threshold),
            "inertia": self.inertia.to_list(),
            "gapRatio": float(self.gap_ratio),
            "conditioningRoute": self.conditioning_route.value,
            "converged": self.converged,
        }


def _as_float_array(matrix: Union[SymMatrix, np.ndarray]) -> np.ndarray:
    if isinstance(matrix, SymMatrix):
        if matrix.is_exact:
            raise ScalarModeMismatchError("浮点引擎需要浮点模式矩阵，请先显式调用 to_float()")
        array = matrix.to_numpy()
    else:
        array = np.array(matrix, dtype=float)
    if array.ndim != 2 or array.shape[0] != array.shape[1]:
        raise ValidationError("需要方阵")
    if not np.all(np.isfinite(array)):
        raise ValidationError("矩阵含非有限元素")
    return array


def _off_norm(a: np.ndarray) -> float:
    # 直接对严格下三角求平方和，‖A‖² − Σa_ii² 会相消到 1e-8 量级
    return float(np.sqrt(2.0) * np.linalg.norm(np.tril(a, -1)))


def jacobi_eigenvalues(array: np.ndarray, sweep_tol: float, max_sweeps: int) -> np.ndarray:
    """
    循环 Jacobi 旋转

    第 4 轮之后，相对于两个对角元可忽略的 a_pq 直接置零；|θ| 过大时取 t = 1/(2θ)

    Raises:
        NoConvergenceError: 超过最大扫描次数
    """
    a = array.copy()
    n = a.shape[0]
    norm_f = float(np.linalg.norm(a))
    if n < 2 or norm_f == 0.0:
        return np.sort(np.diag(a).copy())

    for sweep in range(1, max_sweeps + 1):
        off = _off_norm(a)
        if off <= sweep_tol * norm_f:
            logger.debug(f"Jacobi 收敛: sweeps={sweep - 1} off={off:.3e}")
            return np.sort(np.diag(a).copy())
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                g = 100.0 * abs(apq)
                app, aqq = a[p, p], a[q, q]
                if sweep > 4 and abs(app) + g == abs(app) and abs(aqq) + g == abs(aqq):
                    a[p, q] = a[q, p] = 0.0
                    continue
                h = aqq - app
                if abs(h) + g == abs(h):
                    t = apq / h
                else:
                    theta = 0.5 * h / apq
                    t = 1.0 / (abs(theta) + math.sqrt(1.0 + theta * theta))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

    best = np.sort(np.diag(a).copy())
    if _off_norm(a) <= sweep_tol * norm_f:
        return best
    logger.warning(f"⚠️ Jacobi 未在 {max_sweeps} 轮内收敛")
    raise NoConvergenceError(f"Jacobi 未在 {max_sweeps} 轮内收敛", best_eigenvalues=best.tolist())


def eig_sym(matrix: Union[SymMatrix, np.ndarray], sweep_tol: Optional[float] = None,
            max_sweeps: Optional[int] = None, method: str = "auto") -> np.ndarray:
    """
    对称矩阵特征值（升序）

    Args:
        matrix: 浮点对称矩阵
        sweep_tol: 非对角 Frobenius 范数相对阈值
        max_sweeps: 最大扫描轮数
        method: "jacobi" / "lapack" / "auto"（阶数不超过 jacobi_max_order 时用 Jacobi）
    """
    array = _as_float_array(matrix)
    sweep_tol = get_setting("float_engine.sweep_tol", 1e-15) if sweep_tol is None else sweep_tol
    max_sweeps = get_setting("float_engine.max_sweeps", 60) if max_sweeps is None else max_sweeps
    n = array.shape[0]

    if method == "auto":
        method = "jacobi" if n <= get_setting("float_engine.jacobi_max_order", 16) else "lapack"
    if method == "jacobi":
        eigs = jacobi_eigenvalues(array, float(sweep_tol), int(max_sweeps))
    elif method == "lapack":
        eigs = scipy.linalg.eigvalsh(array)
    else:
        raise ValidationError(f"未知特征值求解方法: {method}")

    norm_f = float(np.linalg.norm(array))
    trace_gap = abs(float(np.sum(eigs)) - float(np.trace(array)))
    if trace_gap > n * 2.0 ** -40 * max(norm_f, 1e-300):
        logger.warning(f"⚠️ 特征值之和与迹偏差过大: {trace_gap:.3e}")
    return np.asarray(eigs, dtype=float)


def classify_inertia(eigs: Sequence[float], norm_scale: Optional[float] = None,
                     expected_nullity: Optional[int] = None,
                     threshold_factor: Optional[float] = None,
                     gap_requirement: Optional[float] = None,
                     route: ConditioningRoute = ConditioningRoute.DIRECT) -> SpectrumReport:
    """
    特征值分类

    默认阈值 τ = 64·n·ε·normScale；给出 expected_nullity = z 时把绝对值最小的 z 个
    特征值判为零，并要求谱间隙比不小于 10³

    Raises:
        AmbiguousNullityError: 给定零维数与谱间隙不一致
    """
    values = np.sort(np.asarray(eigs, dtype=float))
    n = len(values)
    mags = np.abs(values)
    if norm_scale is None:
        norm_scale = float(mags.max()) if n else 0.0
    factor = get_setting("float_engine.threshold_factor", 64) if threshold_factor is None else threshold_factor
    required_gap = get_setting("float_engine.gap_requirement", 1000.0) if gap_requirement is None else gap_requirement

    if expected_nullity is None:
        tau = float(factor) * n * EPS * float(norm_scale)
        zero_mask = mags <= tau
        zero_mags, nonzero_mags = mags[zero_mask], mags[~zero_mask]
        gap = _gap(zero_mags, nonzero_mags)
    else:
        z = int(expected_nullity)
        if not 0 <= z <= n:
            raise ValidationError(f"expected_nullity 超出范围: {z}")
        order = np.argsort(mags, kind="stable")
        zero_mags = mags[order[:z]]
        nonzero_mags = mags[order[z:]]
        gap = _gap(zero_mags, nonzero_mags)
        if z == 0:
            tau = 0.0
        elif z == n:
            tau = float(zero_mags.max())
        elif zero_mags.max() == 0.0:
            tau = 0.0
        else:
            tau = math.sqrt(float(zero_mags.max()) * float(nonzero_mags.min()))

    inertia = Inertia(int(np.sum(values > tau)), int(np.sum(mags <= tau)), int(np.sum(values < -tau)))
    report = SpectrumReport(tuple(values.tolist()), tau, inertia, gap, route)

    if expected_nullity is not None and (gap < required_gap or inertia.zeta != expected_nullity):
        logger.warning(f"⚠️ 零特征值个数不明确: 期望 {expected_nullity}, 间隙比 {gap:.3e}")
        raise AmbiguousNullityError(
            f"期望 {expected_nullity} 个零特征值，但谱间隙比仅为 {gap:.3e}", report=report
        )
    return report


def _gap(zero_mags: np.ndarray, nonzero_mags: np.ndarray) -> float:
    if len(zero_mags) == 0 or len(nonzero_mags) == 0:
        return math.inf
    largest_zero = float(zero_mags.max())
    smallest_nonzero = float(nonzero_mags.min())
    if largest_zero == 0.0:
        return math.inf if smallest_nonzero > 0.0 else 0.0
    return smallest_nonzero / largest_zero


def choose_route(spec: FamilySpec, policy: Union[str, RoutePolicy] = RoutePolicy.AUTO) -> ConditioningRoute:
    """auto 策略下，Kwong 族在节点跨度 > 10³ 或 |r| > 20 时走 cosh 合同路线"""
    policy = RoutePolicy.parse(policy)
    if policy is RoutePolicy.DIRECT:
        return ConditioningRoute.DIRECT
    if policy is RoutePolicy.COSH:
        if spec.family is not Family.KWONG:
            raise ValidationError(f"cosh 合同路线仅适用于 Kwong 族: {spec.family.label}")
        return ConditioningRoute.COSH
    if spec.family is not Family.KWONG:
        return ConditioningRoute.DIRECT
    p = spec.points.as_floats()
    ratio = float(p.max() / p.min())
    if ratio > get_setting("float_engine.cosh_ratio_limit", 1000.0) or \
            abs(float(spec.r)) > get_setting("float_engine.cosh_exponent_limit", 20.0):
        return ConditioningRoute.COSH
    return ConditioningRoute.DIRECT


def inertia_float(spec: FamilySpec, policy: Union[str, RoutePolicy] = RoutePolicy.AUTO,
                  expected_nullity: Optional[int] = None) -> SpectrumReport:
    """
    按 FamilySpec 构造浮点矩阵并分类惯性

    cosh 合同路线计算 K̃_r 的谱；由 K_r = ΔK̃_rΔ 与 Sylvester 惯性定律，惯性与 K_r 相同
    """
    from matrix_lib.generators import build_matrix, gen_cosh_kwong_from_points
    from core.domain import ScalarMode

    if spec.family is Family.CROSS_KWONG:
        raise ValidationError("交叉 Kwong 矩阵不对称，没有惯性")

    route = choose_route(spec, policy)
    if route is ConditioningRoute.COSH:
        matrix = gen_cosh_kwong_from_points(spec.points, spec.r)
    else:
        matrix = build_matrix(spec, ScalarMode.FLOAT)
    logger.debug(f"浮点惯性: {spec.family.label} n={spec.n} r={spec.r} route={route.value}")

    eigs = eig_sym(matrix)
    return classify_inertia(eigs, expected_nullity=expected_nullity, route=route)


@dataclass(frozen=True)
class InterlacingResult:
    """Cauchy 交错检查结果"""
    holds: bool
    max_violation: float
    tolerance: float


def check_interlacing(matrix: Union[SymMatrix, np.ndarray], factor: Optional[float] = None) -> InterlacingResult:
    """
    检查每个 (n-1)×(n-1) 主子矩阵的特征值与原矩阵交错：λ_i ≤ μ_i ≤ λ_{i+1}

    容差 8·n·ε·‖M‖₂
    """
    array = _as_float_array(matrix)
    n = array.shape[0]
    factor = get_setting("float_engine.interlacing_factor", 8) if factor is None else factor
    full = eig_sym(array)
    tol = float(factor) * n * EPS * float(np.max(np.abs(full))) if n else 0.0
    worst = 0.0
    for k in range(n if n > 1 else 0):
        keep = [i for i in range(n) if i != k]
        sub = eig_sym(array[np.ix_(keep, keep)])
        lower = full[:-1] - sub
        upper = sub - full[1:]
        worst = max(worst, float(np.max(lower, initial=0.0)), float(np.max(upper, initial=0.0)))
    return InterlacingResult(worst <= tol, worst, tol)
