"""
有理数线性代数
基于 fractions.Fraction 的精确矩阵运算：乘法、行列式、秩、最简行阶梯形、零空间
矩阵统一以 List[List[Fraction]] 表示
"""

import math
from fractions import Fraction
from functools import reduce
from typing import List, Sequence, Tuple

from .exceptions import LengthMismatchError

RationalMatrix = List[List[Fraction]]


def zeros(nrows: int, ncols: int) -> RationalMatrix:
    return [[Fraction(0)] * ncols for _ in range(nrows)]


def transpose(a: Sequence[Sequence[Fraction]]) -> RationalMatrix:
    return [list(col) for col in zip(*a)] if a else []


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> RationalMatrix:
    """精确矩阵乘法 A·B"""
    if a and len(a[0]) != len(b):
        raise LengthMismatchError(f"矩阵维度不匹配: {len(a)}x{len(a[0])} · {len(b)}x?")
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def congruence(a: Sequence[Sequence[Fraction]], x: Sequence[Sequence[Fraction]]) -> RationalMatrix:
    """XᵀAX"""
    return mat_mul(mat_mul(transpose(x), a), x)


def det(a: Sequence[Sequence[Fraction]]) -> Fraction:
    """
    精确行列式（高斯消元，取首个非零主元）

    Args:
        a: 方阵

    Returns:
        行列式值
    """
    m = [list(map(Fraction, row)) for row in a]
    n = len(m)
    if any(len(row) != n for row in m):
        raise LengthMismatchError("行列式需要方阵")
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            result = -result
        p = m[col][col]
        result *= p
        for r in range(col + 1, n):
            factor = m[r][col] / p
            if factor:
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return result


def rref(a: Sequence[Sequence[Fraction]]) -> Tuple[RationalMatrix, List[int]]:
    """
    最简行阶梯形

    Returns:
        (R, 主元列下标列表)
    """
    m = [list(map(Fraction, row)) for row in a]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots: List[int] = []
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        pivot = next((r for r in range(row, nrows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        p = m[row][col]
        m[row] = [x / p for x in m[row]]
        for r in range(nrows):
            if r != row and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
    return m, pivots


def rank(a: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(a)[1]) if a else 0


def integer_normalize(vec: Sequence[Fraction]) -> List[Fraction]:
    """
    缩放为互素整数向量，首个非零分量为正
    """
    denominators = [Fraction(v).denominator for v in vec]
    lcm = reduce(lambda x, y: x * y // math.gcd(x, y), denominators, 1)
    ints = [int(Fraction(v) * lcm) for v in vec]
    g = reduce(math.gcd, (abs(v) for v in ints), 0)
    if g == 0:
        return [Fraction(0)] * len(vec)
    ints = [v // g for v in ints]
    lead = next(v for v in ints if v != 0)
    if lead < 0:
        ints = [-v for v in ints]
    return [Fraction(v) for v in ints]


def null_space(a: Sequence[Sequence[Fraction]], ncols: int) -> List[List[Fraction]]:
    """
    精确零空间基，每个自由列对应一个基向量，向量已整数化

    Args:
        a: 系数矩阵（可为空行列表）
        ncols: 未知量个数

    Returns:
        基向量列表
    """
    if not a:
        return [[Fraction(int(i == k)) for i in range(ncols)] for k in range(ncols)]
    r, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            vec[pc] = -r[row_idx][f]
        basis.append(integer_normalize(vec))
    return basis


def quadratic_form(a: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> Fraction:
    """⟨x, A x⟩"""
    n = len(x)
    return sum((x[i] * a[i][j] * x[j] for i in range(n) for j in range(n)), Fraction(0))
