"""
惯性预测
K_r 惯性的闭式预测（对全部实数 r 与 n ≥ 1 均有定义），以及 B_r、Loewner 矩阵的相关预测
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional

from core.domain import Exponent, Family, Inertia
from core.exceptions import BadExponentError, NonpositiveExponentError, ValidationError


class CaseKind(Enum):
    """预测分支"""
    UNIT_INTERVAL = "UnitInterval"
    ODD_INTEGER = "OddInteger"
    OPEN_BAND = "OpenBand"
    TAIL_ODD_N = "TailOddN"
    TAIL_EVEN_N = "TailEvenN"
    ZERO_EXPONENT = "ZeroExponent"
    NEGATIVE_REFLECTED = "NegativeReflected"
    ORDER_1 = "Order1"


@dataclass(frozen=True)
class PredictionCase:
    """预测结果：分支、分支参数与惯性"""

    kind: CaseKind
    inertia: Inertia
    n: int
    r: Exponent
    parameter: Optional[int] = None
    reflected_from: Optional["PredictionCase"] = None

    @property
    def case_tag(self) -> str:
        if self.parameter is not None:
            return f"{self.kind.value}({self.parameter})"
        return self.kind.value

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "n": self.n,
            "r": self.r.to_json(),
            "caseTag": self.case_tag,
            "inertia": self.inertia.to_list(),
        }
        if self.reflected_from is not None:
            data["reflectedFrom"] = self.reflected_from.case_tag
        return data


def odd_integer_inertia(n: int, k: int) -> Inertia:
    """奇数 k ≤ n：k ≡ 1 (mod 4) 时 (⌈k/2⌉, n−k, ⌊k/2⌋)，k ≡ 3 (mod 4) 时 (⌊k/2⌋, n−k, ⌈k/2⌉)"""
    up, down = (k + 1) // 2, k // 2
    if k % 4 == 1:
        return Inertia(up, n - k, down)
    return Inertia(down, n - k, up)


def open_band_inertia(n: int, k: int) -> Inertia:
    """k < r < k+2 < n：k ≡ 1 (mod 4) 时 (⌈k/2⌉, 0, n−⌈k/2⌉)，k ≡ 3 (mod 4) 时 (n−⌈k/2⌉, 0, ⌈k/2⌉)"""
    up = (k + 1) // 2
    if k % 4 == 1:
        return Inertia(up, 0, n - up)
    return Inertia(n - up, 0, up)


def greatest_odd_below(r: Exponent) -> int:
    """小于 r 的最大奇数"""
    if r.is_integer:
        m = r.as_int - 1
    else:
        m = math.ceil(float(r.value)) - 1
    return m if m % 2 == 1 else m - 1


def _predict_nonnegative(n: int, r: Exponent) -> PredictionCase:
    if n == 1:
        return PredictionCase(CaseKind.ORDER_1, Inertia(1, 0, 0), n, r)
    if r.is_integer and r.as_int == 0:
        return PredictionCase(CaseKind.ZERO_EXPONENT, Inertia(n, 0, 0), n, r)
    if r.value < 1 and not r.is_integer:
        return PredictionCase(CaseKind.UNIT_INTERVAL, Inertia(n, 0, 0), n, r)
    if r.is_odd_integer and r.as_int <= n:
        k = r.as_int
        return PredictionCase(CaseKind.ODD_INTEGER, odd_integer_inertia(n, k), n, r, parameter=k)

    k = greatest_odd_below(r)
    if k + 2 < n:
        return PredictionCase(CaseKind.OPEN_BAND, open_band_inertia(n, k), n, r, parameter=k)
    if n % 2 == 1:
        return PredictionCase(CaseKind.TAIL_ODD_N, odd_integer_inertia(n, n), n, r)
    return PredictionCase(CaseKind.TAIL_EVEN_N, Inertia(n // 2, 0, n // 2), n, r)


def predict_kwong_inertia(n: int, r: Any) -> PredictionCase:
    """
    K_r 惯性的闭式预测

    Args:
        n: 阶数 ≥ 1
        r: 任意实指数；负指数按 In K_{-r} = In K_r 反射

    Returns:
        PredictionCase
    """
    if n < 1:
        raise ValidationError(f"阶数必须 ≥ 1: n={n}")
    r = Exponent.of(r)
    if r.value < 0 and not (r.is_integer and r.as_int == 0):
        base = _predict_nonnegative(n, abs(r))
        return PredictionCase(CaseKind.NEGATIVE_REFLECTED, base.inertia, n, r, reflected_from=base)
    return _predict_nonnegative(n, r)


def predict_singular(n: int, r: Any) -> bool:
    """|r| 为小于 n 的奇数时 K_r 奇异"""
    r = abs(Exponent.of(r))
    return r.is_odd_integer and r.as_int < n


def predict_absdiff_inertia(n: int, r: Any) -> Inertia:
    """In B_r = In K_{r+1}，r > 0"""
    r = Exponent.of(r)
    if r.value <= 0:
        raise NonpositiveExponentError(f"B_r 需要 r > 0: r={r}")
    return predict_kwong_inertia(n, r.shifted(1)).inertia


def flip_points(n: int) -> List[int]:
    """K_r 惯性发生跳变的 r：不超过 n−1 的全部奇数"""
    if n < 2:
        raise ValidationError(f"flip_points 需要 n ≥ 2: n={n}")
    return list(range(1, n, 2))


def absdiff_flip_points(n: int) -> List[int]:
    """B_r 的跳变点：2..n−2 的偶数"""
    if n < 2:
        raise ValidationError(f"absdiff_flip_points 需要 n ≥ 2: n={n}")
    return list(range(2, n - 1, 2))


def loewner_flip_points(n: int) -> List[int]:
    """L_r 的奇异整数 1..n−1"""
    if n < 2:
        raise ValidationError(f"loewner_flip_points 需要 n ≥ 2: n={n}")
    return list(range(1, n))


def predict_loewner_inertia_partial(n: int, r: Any) -> Optional[Inertia]:
    """仅在 0<r<1 与 1<r<2 给出 L_r 的惯性，其余返回 None"""
    value = float(Exponent.of(r))
    if 0 < value < 1:
        return Inertia(n, 0, 0)
    if 1 < value < 2:
        return Inertia(1, 0, n - 1)
    return None


def predict_loewner_integer_inertia(n: int, k: Any) -> Inertia:
    """
    整数 1 ≤ k ≤ n：L_k = WᵀJW，J 为 k 阶全 1 反对角矩阵，
    In J = (⌈k/2⌉, 0, ⌊k/2⌋)，故 In L_k = (⌈k/2⌉, n−k, ⌊k/2⌋)
    """
    k = Exponent.of(k)
    if not k.is_integer or not 1 <= k.as_int <= n:
        raise BadExponentError(f"需要 1 ≤ k ≤ n 的整数: k={k}, n={n}")
    k = k.as_int
    return Inertia((k + 1) // 2, n - k, k // 2)


def expected_nullity(family: Family, n: int, r: Any) -> Optional[int]:
    """
    预测的零特征值个数；无法预测时返回 None
    """
    r = Exponent.of(r) if r is not None else None
    if family in (Family.KWONG, Family.COSH_KWONG):
        return predict_kwong_inertia(n, r).inertia.zeta
    if family is Family.CAUCHY:
        return 0
    if family is Family.POWER_ABS_DIFF:
        return predict_absdiff_inertia(n, r).zeta
    if family is Family.LOEWNER:
        if r.is_integer and 1 <= r.as_int <= n:
            return n - r.as_int
        if r.is_integer and r.as_int == 0:
            return n
        return 0 if predict_loewner_inertia_partial(n, r) is not None else None
    if family is Family.POWER_SUM:
        if r.is_integer and r.as_int >= 0:
            return n - min(n, r.as_int + 1)
        return None
    return None


def singular_exponents(family: Family, n: int) -> List[int]:
    """各族在 r > 0 上的奇异整数指数"""
    if n < 2:
        return []
    if family in (Family.KWONG, Family.COSH_KWONG):
        return flip_points(n)
    if family is Family.LOEWNER:
        return loewner_flip_points(n)
    if family is Family.POWER_ABS_DIFF:
        return absdiff_flip_points(n)
    return []


def predict_inertia(family: Family, n: int, r: Any) -> Optional[Inertia]:
    """按族分派的惯性预测；无闭式结果时返回 None"""
    if family in (Family.KWONG, Family.COSH_KWONG):
        return predict_kwong_inertia(n, r).inertia
    if family is Family.CAUCHY:
        return Inertia(n, 0, 0)
    if family is Family.POWER_ABS_DIFF:
        return predict_absdiff_inertia(n, r)
    if family is Family.LOEWNER:
        exponent = Exponent.of(r)
        if exponent.is_integer and 1 <= exponent.as_int <= n:
            return predict_loewner_integer_inertia(n, exponent)
        return predict_loewner_inertia_partial(n, exponent)
    return None
