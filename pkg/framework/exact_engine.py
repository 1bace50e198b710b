"""
精确惯性引擎
以有理数合同变换把对称矩阵化为对角块形式，按 Sylvester 惯性定律读出 (π, ζ, ν)；
另提供特征多项式路径作为独立校验。
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple, Union

from core.domain import GeneralMatrix, Inertia, SymMatrix, format_scalar
from core.exceptions import IndexOutOfRangeError, LengthMismatchError, ScalarModeMismatchError
from core.rational_linalg import det

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiagPivot:
    """1×1 主元"""
    index: int
    value: Fraction

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "Diag", "index": self.index, "value": format_scalar(self.value)}


@dataclass(frozen=True)
class BlockPivot:
    """零对角 2×2 双曲块，贡献 (1,0,1)"""
    indices: Tuple[int, int]
    det: Fraction

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "Block2x2", "indices": list(self.indices), "det": format_scalar(self.det)}


PivotEvent = Union[DiagPivot, BlockPivot]


@dataclass
class PivotLog:
    """消元过程记录，下标为原矩阵下标（从 0 开始）"""

    events: List[PivotEvent] = field(default_factory=list)
    zero_block: int = 0

    @property
    def order(self) -> int:
        return sum(1 if isinstance(e, DiagPivot) else 2 for e in self.events) + self.zero_block

    def determinant(self) -> Fraction:
        """主元之积与 2×2 块行列式之积"""
        if self.zero_block:
            return Fraction(0)
        result = Fraction(1)
        for event in self.events:
            result *= event.value if isinstance(event, DiagPivot) else event.det
        return result

    def inertia(self) -> Inertia:
        pi = nu = 0
        for event in self.events:
            if isinstance(event, BlockPivot):
                pi += 1
                nu += 1
            elif event.value > 0:
                pi += 1
            else:
                nu += 1
        return Inertia(pi, self.zero_block, nu)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "events": [e.to_dict() for e in self.events],
            "zeroBlock": self.zero_block,
        }


def _require_exact(matrix: Union[SymMatrix, GeneralMatrix]) -> None:
    if not matrix.is_exact:
        raise ScalarModeMismatchError("精确引擎只接受精确模式矩阵")


def inertia_exact(matrix: SymMatrix) -> Tuple[Inertia, PivotLog]:
    """
    精确惯性指数

    主元选择：优先取剩余块中绝对值最大的非零对角元；对角全零而存在非零非对角元时
    取绝对值最大者做 2×2 双曲块消元；剩余块全零时终止，其维数即 ζ

    Args:
        matrix: 精确模式对称矩阵

    Returns:
        (惯性指数, 主元记录)
    """
    _require_exact(matrix)
    a = [list(row) for row in matrix.rows()]
    active = list(range(matrix.order))
    log = PivotLog()

    while active:
        diag = [i for i in active if a[i][i] != 0]
        if diag:
            i = max(diag, key=lambda k: (abs(a[k][k]), -k))
            d = a[i][i]
            log.events.append(DiagPivot(i, d))
            active.remove(i)
            for u in active:
                if a[u][i] == 0:
                    continue
                factor = a[u][i] / d
                for v in active:
                    a[u][v] -= factor * a[i][v]
            logger.debug(f"1×1 主元 index={i} value={format_scalar(d)}")
            continue

        best = None
        for pos, i in enumerate(active):
            for j in active[pos + 1:]:
                if a[i][j] != 0 and (best is None or abs(a[i][j]) > abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            log.zero_block = len(active)
            break

        i, j = best
        b = a[i][j]
        log.events.append(BlockPivot((i, j), -b * b))
        active.remove(i)
        active.remove(j)
        for u in active:
            aui, auj = a[u][i], a[u][j]
            if aui == 0 and auj == 0:
                continue
            for v in active:
                a[u][v] -= (aui * a[j][v] + auj * a[i][v]) / b
        logger.debug(f"2×2 主元 indices=({i},{j}) b={format_scalar(b)}")

    return log.inertia(), log


def charpoly_exact(matrix: SymMatrix) -> List[Fraction]:
    """
    特征多项式 det(λI - M) 的系数（降幂，首一）

    Faddeev–LeVerrier 递推：M_k = A·M_{k-1} + c_{n-k+1}·I，c_{n-k} = -tr(A·M_k)/k
    """
    _require_exact(matrix)
    a = matrix.rows()
    n = matrix.order
    coeffs = [Fraction(1)]
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        prev = coeffs[-1]
        # M_k = A·M_{k-1} + c·I
        m = [
            [sum((a[i][t] * m[t][j] for t in range(n)), Fraction(0)) + (prev if i == j else 0)
             for j in range(n)]
            for i in range(n)
        ]
        trace = sum((a[i][t] * m[t][i] for i in range(n) for t in range(n)), Fraction(0))
        coeffs.append(-trace / k)
    return coeffs


def _sign_changes(seq: Sequence[Fraction]) -> int:
    signs = [1 if x > 0 else -1 for x in seq if x != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def inertia_from_charpoly(coeffs: Sequence[Any]) -> Inertia:
    """
    由实根多项式的系数读出惯性

    ζ 为末尾零系数个数；对实根多项式，Descartes 符号规则给出的正根数恰为符号变化数
    """
    coeffs = [Fraction(c) for c in coeffs]
    n = len(coeffs) - 1
    zeta = 0
    while zeta < n and coeffs[n - zeta] == 0:
        zeta += 1
    pi = _sign_changes(coeffs[: n + 1 - zeta])
    return Inertia(pi, zeta, n - zeta - pi)


def minor_exact(matrix: Union[SymMatrix, GeneralMatrix], rows: Sequence[int],
                cols: Sequence[int]) -> Fraction:
    """
    子式（下标从 0 开始）

    Raises:
        LengthMismatchError: 行列下标个数不同
        IndexOutOfRangeError: 下标越界
    """
    _require_exact(matrix)
    rows, cols = list(rows), list(cols)
    if len(rows) != len(cols):
        raise LengthMismatchError(f"行列下标个数不同: {len(rows)} != {len(cols)}")
    if isinstance(matrix, SymMatrix):
        nrows = ncols = matrix.order
    else:
        nrows, ncols = matrix.shape
    for idx in rows:
        if not 0 <= idx < nrows:
            raise IndexOutOfRangeError(f"行下标越界: {idx}")
    for idx in cols:
        if not 0 <= idx < ncols:
            raise IndexOutOfRangeError(f"列下标越界: {idx}")
    return det([[matrix.entry(i, j) for j in cols] for i in rows])


def determinant_exact(matrix: Union[SymMatrix, GeneralMatrix]) -> Fraction:
    _require_exact(matrix)
    return det(matrix.rows())
