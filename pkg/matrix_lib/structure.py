"""
结构恒等式
==========

Vandermonde 因子分解、广义 Sylvester 惯性定律、三项恒等式、
矩子空间 H_j 的精确基与条件惯性、负指数合同关系。
D = diag(p) 与全 1 矩阵 E 只以隐式算子出现，不单独存储。

Author: KwongLab Team
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np
import scipy.linalg

from core.domain import (
    Exponent,
    GeneralMatrix,
    Inertia,
    Points,
    ScalarMode,
    SymMatrix,
)
from core.exceptions import (
    BadExponentError,
    DepthOutOfRangeError,
    ExactModeUnsupportedError,
    LengthMismatchError,
    PreconditionViolatedError,
    RankDeficientError,
    ValidationError,
)
from core.rational_linalg import congruence, null_space, quadratic_form, rank
from framework.exact_engine import inertia_exact
from framework.float_engine import classify_inertia, eig_sym

from .generators import (
    VandermondePair,
    gen_kwong,
    gen_loewner,
    gen_loewner_vandermonde_pair,
    gen_vandermonde_pair,
    scale_factor,
)


@dataclass(frozen=True)
class FactorizationCheck:
    """M = WᵀVW 的逐元素校验结果"""
    holds: bool
    residual: Fraction
    pair: VandermondePair


@dataclass(frozen=True)
class SylvesterCheck:
    """In XᵀAX 与 In A + (0, n−r, 0) 的比较"""
    holds: bool
    compressed: Inertia
    expected: Inertia


@dataclass(frozen=True)
class SubspaceBasis:
    """H_j 的基，vectors 为 n−j 个长度 n 的列向量"""
    j: int
    vectors: tuple
    mode: ScalarMode

    @property
    def dimension(self) -> int:
        return len(self.vectors)

    def as_matrix(self) -> GeneralMatrix:
        """n×(n−j) 矩阵，列为基向量"""
        n = len(self.vectors[0]) if self.vectors else 0
        rows = [[vec[i] for vec in self.vectors] for i in range(n)]
        return GeneralMatrix(tuple(tuple(row) for row in rows), self.mode)


def _require_exact_points(points: Points):
    if not points.is_exact:
        raise ExactModeUnsupportedError("该校验需要有理节点")


def _integer_exponent(r, minimum: Optional[int] = None) -> int:
    r = Exponent.of(r)
    if not r.is_integer:
        raise BadExponentError(f"指数必须为整数: r={r}")
    k = r.as_int
    if minimum is not None and k < minimum:
        raise BadExponentError(f"指数必须 ≥ {minimum}: r={k}")
    return k


def _max_residual(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Fraction:
    return max((abs(x - y) for row_a, row_b in zip(a, b) for x, y in zip(row_a, row_b)), default=Fraction(0))


def verify_vandermonde_factorization(points: Points, r) -> FactorizationCheck:
    """
    校验 K_r = WᵀVW（奇数 1 ≤ r ≤ n，精确模式）

    Returns:
        FactorizationCheck，residual 为最大逐元素偏差
    """
    _require_exact_points(points)
    pair = gen_vandermonde_pair(points, r)
    product = congruence(pair.V.rows(), pair.W.rows())
    residual = _max_residual(gen_kwong(points, r, ScalarMode.EXACT).rows(), product)
    return FactorizationCheck(residual == 0, residual, pair)


def verify_loewner_factorization(points: Points, k) -> FactorizationCheck:
    """校验 L_k = WᵀJW（整数 1 ≤ k ≤ n，精确模式）"""
    _require_exact_points(points)
    pair = gen_loewner_vandermonde_pair(points, k)
    product = congruence(pair.V.rows(), pair.W.rows())
    residual = _max_residual(gen_loewner(points, k, ScalarMode.EXACT).rows(), product)
    return FactorizationCheck(residual == 0, residual, pair)


def generalized_sylvester_check(a: SymMatrix, x: GeneralMatrix) -> SylvesterCheck:
    """
    广义 Sylvester 惯性定律：rank X = r ≤ n 时 In XᵀAX = In A + (0, n−r, 0)

    Args:
        a: r×r 精确对称矩阵
        x: r×n 精确满行秩矩阵

    Raises:
        RankDeficientError: rank X < r
    """
    if not (a.is_exact and x.is_exact):
        raise ExactModeUnsupportedError("广义 Sylvester 校验需要精确矩阵")
    r, n = x.shape
    if a.order != r:
        raise LengthMismatchError(f"A 的阶数 {a.order} 与 X 的行数 {r} 不一致")
    if r > n or rank(x.rows()) < r:
        raise RankDeficientError(f"X 不是满行秩: rank < {r}")
    compressed, _ = inertia_exact(SymMatrix.from_rows(congruence(a.rows(), x.rows()), ScalarMode.EXACT))
    base, _ = inertia_exact(a)
    expected = base + Inertia(0, n - r, 0)
    return SylvesterCheck(compressed == expected, compressed, expected)


def verify_three_term_identity(points: Points, r) -> bool:
    """
    K_r = D^{r-1}E − D·K_{r-2}·D + E·D^{r-1}，整数 r ≥ 2，逐元素精确相等
    """
    _require_exact_points(points)
    k = _integer_exponent(r, minimum=2)
    lhs = gen_kwong(points, k, ScalarMode.EXACT)
    lower = gen_kwong(points, k - 2, ScalarMode.EXACT)
    p = list(points)
    n = points.n
    return all(
        lhs.entry(i, j) == p[i] ** (k - 1) - p[i] * lower.entry(i, j) * p[j] + p[j] ** (k - 1)
        for i in range(n) for j in range(i + 1)
    )


def basis_Hj(points: Points, j: int) -> SubspaceBasis:
    """
    H_j = {x : Σ p_i^t x_i = 0, t = 0..j−1} 的基

    有理节点时为精确零空间基（互素整数列，首个非零分量为正）；浮点节点时为正交基

    Raises:
        DepthOutOfRangeError: j ∉ [0, n)
    """
    n = points.n
    if not 0 <= j < n:
        raise DepthOutOfRangeError(f"需要 0 ≤ j < n: j={j}, n={n}")
    if points.is_exact:
        moments = [[p ** t for p in points] for t in range(j)]
        vectors = null_space(moments, n)
        return SubspaceBasis(j, tuple(tuple(v) for v in vectors), ScalarMode.EXACT)

    pf = points.as_floats()
    if j == 0:
        basis = np.eye(n)
    else:
        basis = scipy.linalg.null_space(np.vstack([pf ** t for t in range(j)]))
    return SubspaceBasis(j, tuple(tuple(float(e) for e in basis[:, c]) for c in range(basis.shape[1])),
                         ScalarMode.FLOAT)


def conditional_inertia(matrix: SymMatrix, j: int, points: Optional[Points] = None) -> Inertia:
    """
    M 压缩到 H_j 上的惯性 In PᵀMP，P 的列为 basis_Hj 的基

    Args:
        matrix: 对称矩阵
        j: 深度
        points: 定义 H_j 的节点，默认取 matrix.provenance 的节点
    """
    if points is None:
        if matrix.provenance is None:
            raise ValidationError("需要 points 或带来源描述的矩阵")
        points = matrix.provenance.points
    if points.n != matrix.order:
        raise LengthMismatchError(f"节点个数 {points.n} 与矩阵阶数 {matrix.order} 不一致")

    if matrix.is_exact:
        if not points.is_exact:
            raise ExactModeUnsupportedError("精确矩阵需要有理节点定义 H_j")
        p = basis_Hj(points, j).as_matrix()
        compressed = SymMatrix.from_rows(congruence(matrix.rows(), p.rows()), ScalarMode.EXACT)
        return inertia_exact(compressed)[0]

    p = np.array(basis_Hj(points.to_float_points(), j).as_matrix().to_numpy())
    m = matrix.to_numpy()
    compressed = p.T @ m @ p
    compressed = 0.5 * (compressed + compressed.T)
    norm_scale = float(np.max(np.abs(eig_sym(m))))
    return classify_inertia(eig_sym(compressed), norm_scale=norm_scale).inertia


def verify_negative_exponent_congruence(points: Points, r) -> bool:
    """K_{−r} = D^{−r}·K_r·D^{−r}，整数 r，逐元素精确相等"""
    _require_exact_points(points)
    k = _integer_exponent(r)
    lhs = gen_kwong(points, -k, ScalarMode.EXACT)
    rhs = gen_kwong(points, k, ScalarMode.EXACT)
    p = list(points)
    return all(
        lhs.entry(i, j) == p[i] ** (-k) * rhs.entry(i, j) * p[j] ** (-k)
        for i in range(points.n) for j in range(i + 1)
    )


def verify_recursion_quadratic_form(points: Points, r, x: Sequence[Union[int, Fraction]]) -> bool:
    """
    对 x ∈ H_1 校验 ⟨x, K_r x⟩ = −⟨Dx, K_{r−2} Dx⟩（整数 r ≥ 2，精确）

    Raises:
        PreconditionViolatedError: x ∉ H_1
    """
    _require_exact_points(points)
    k = _integer_exponent(r, minimum=2)
    x = [Fraction(v) for v in x]
    if len(x) != points.n:
        raise LengthMismatchError(f"向量长度 {len(x)} 与节点个数 {points.n} 不一致")
    if sum(x) != 0:
        raise PreconditionViolatedError("x 不在 H_1 中（分量和不为 0）")
    dx = [p * v for p, v in zip(points, x)]
    lhs = quadratic_form(gen_kwong(points, k, ScalarMode.EXACT).rows(), x)
    rhs = quadratic_form(gen_kwong(points, k - 2, ScalarMode.EXACT).rows(), dx)
    return lhs == -rhs


def vandermonde_core_inertia(r) -> Inertia:
    """V 的惯性：r ≡ 1 (mod 4) 时 ((r+1)/2, 0, (r−1)/2)，r ≡ 3 (mod 4) 时 ((r−1)/2, 0, (r+1)/2)"""
    k = _integer_exponent(r, minimum=1)
    if k % 2 == 0:
        raise BadExponentError(f"需要奇数: r={k}")
    if k % 4 == 1:
        return Inertia((k + 1) // 2, 0, (k - 1) // 2)
    return Inertia((k - 1) // 2, 0, (k + 1) // 2)


def scaled_inertia_witness(points: Points, c, r) -> bool:
    """均匀缩放校验：K_r(c·p) = c^{r−1}·K_r(p) 逐元素精确相等"""
    _require_exact_points(points)
    k = _integer_exponent(r)
    c = Fraction(c)
    if c <= 0:
        raise ValidationError(f"缩放因子必须为正: {c}")
    scaled = gen_kwong(points.scaled(c), k, ScalarMode.EXACT)
    base = gen_kwong(points, k, ScalarMode.EXACT)
    factor = scale_factor(c, k)
    return all(scaled.entry(i, j) == factor * base.entry(i, j)
               for i in range(points.n) for j in range(i + 1))
