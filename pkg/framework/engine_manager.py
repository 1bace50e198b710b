"""
引擎管理器
负责惯性引擎的注册、选择（exact / float / auto）与奇异指数吸附
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Type, Union

from core.config_manager import get_setting
from core.domain import Exponent, Family, FamilySpec, Inertia, ScalarMode
from core.exceptions import ExactModeUnsupportedError, ValidationError
from matrix_lib.generators import build_matrix, can_build_exact

from .exact_engine import PivotLog, inertia_exact
from .float_engine import RoutePolicy, SpectrumReport, inertia_float
from .oracle import expected_nullity, singular_exponents

logger = logging.getLogger(__name__)


class EngineKind(Enum):
    """引擎类型"""
    EXACT = "exact"
    FLOAT = "float"
    AUTO = "auto"

    @classmethod
    def parse(cls, value: Union[str, "EngineKind"]) -> "EngineKind":
        if isinstance(value, EngineKind):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError as exc:
            raise ValidationError(f"未知引擎: {value}") from exc


@dataclass(frozen=True)
class InertiaResult:
    """一次惯性计算的结果"""

    spec: FamilySpec
    inertia: Inertia
    engine: EngineKind
    pivot_log: Optional[PivotLog] = None
    spectrum: Optional[SpectrumReport] = None
    snapped_r: Optional[int] = None

    def to_dict(self, explain: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "spec": self.spec.to_dict(),
            "engine": self.engine.value,
            "inertia": self.inertia.to_list(),
        }
        if self.snapped_r is not None:
            data["snappedR"] = self.snapped_r
        if self.spectrum is not None:
            data["spectrum"] = self.spectrum.to_dict()
        if explain and self.pivot_log is not None:
            data["pivotLog"] = self.pivot_log.to_dict()
        return data


class InertiaEngine:
    """惯性引擎基类"""

    kind: EngineKind = EngineKind.AUTO

    def compute(self, spec: FamilySpec, **kwargs) -> InertiaResult:
        raise NotImplementedError


class ExactInertiaEngine(InertiaEngine):
    """有理数合同消元引擎"""

    kind = EngineKind.EXACT

    def compute(self, spec: FamilySpec, **kwargs) -> InertiaResult:
        if not can_build_exact(spec):
            raise ExactModeUnsupportedError(
                f"{spec.family.label} 无法精确构造: r={spec.r}, 节点模式={spec.points.mode.value}"
            )
        matrix = build_matrix(spec, ScalarMode.EXACT)
        inertia, log = inertia_exact(matrix)
        return InertiaResult(spec, inertia, self.kind, pivot_log=log)


class FloatInertiaEngine(InertiaEngine):
    """浮点特征值引擎，在预测的奇异指数附近吸附并使用预测零维数"""

    kind = EngineKind.FLOAT

    def compute(self, spec: FamilySpec, policy: Union[str, RoutePolicy] = RoutePolicy.AUTO,
                expected: Optional[int] = None, snap: bool = True, **kwargs) -> InertiaResult:
        snapped = nearest_singular_exponent(spec) if snap and expected is None else None
        if snapped is not None:
            sign = -1 if spec.r.value < 0 else 1
            target = spec.with_r(sign * snapped)
            expected = expected_nullity(spec.family, spec.n, target.r)
            logger.debug(f"吸附奇异指数: r={spec.r} → {target.r}, 期望零维数 {expected}")
            report = inertia_float(target, policy, expected_nullity=expected)
        else:
            report = inertia_float(spec, policy, expected_nullity=expected)
        return InertiaResult(spec, report.inertia, self.kind, spectrum=report, snapped_r=snapped)


def nearest_singular_exponent(spec: FamilySpec, tol: Optional[float] = None) -> Optional[int]:
    """|r| 与某个预测奇异整数相距不超过 tol 时返回该整数"""
    if spec.r is None:
        return None
    tol = get_setting("sweep.singular_tol", 1e-9) if tol is None else tol
    magnitude = abs(float(spec.r))
    candidates = singular_exponents(spec.family, spec.n)
    if spec.family is not Family.KWONG and spec.family is not Family.COSH_KWONG and spec.r.value < 0:
        return None
    for k in candidates:
        if abs(magnitude - k) <= tol:
            return k
    return None


class EngineFactory:
    """
    引擎工厂
    负责引擎类的注册和实例创建
    """

    def __init__(self):
        self._engine_classes: Dict[EngineKind, Type[InertiaEngine]] = {}

    def register_engine(self, kind: EngineKind, engine_class: Type[InertiaEngine]):
        self._engine_classes[kind] = engine_class

    def create_engine(self, kind: EngineKind) -> InertiaEngine:
        if kind not in self._engine_classes:
            raise ValidationError(f"未注册的引擎: {kind.value}")
        return self._engine_classes[kind]()

    def get_available_engines(self) -> List[str]:
        return [kind.value for kind in self._engine_classes]


class EngineManager:
    """
    引擎管理器
    auto 规则：整数 r、有理节点且 n ≤ exact_max_order 时用精确引擎，否则用浮点引擎
    """

    def __init__(self, exact_max_order: Optional[int] = None):
        self.factory = EngineFactory()
        self.factory.register_engine(EngineKind.EXACT, ExactInertiaEngine)
        self.factory.register_engine(EngineKind.FLOAT, FloatInertiaEngine)
        self.exact_max_order = exact_max_order or get_setting("runtime.exact_max_order", 10)

    def resolve(self, spec: FamilySpec, engine: Union[str, EngineKind]) -> EngineKind:
        kind = EngineKind.parse(engine)
        if kind is not EngineKind.AUTO:
            return kind
        if can_build_exact(spec) and spec.n <= self.exact_max_order:
            return EngineKind.EXACT
        return EngineKind.FLOAT

    def compute(self, spec: FamilySpec, engine: Union[str, EngineKind] = EngineKind.AUTO,
                **kwargs) -> InertiaResult:
        if spec.family is Family.CROSS_KWONG:
            raise ValidationError("交叉 Kwong 矩阵不对称，没有惯性")
        kind = self.resolve(spec, engine)
        return self.factory.create_engine(kind).compute(spec, **kwargs)


_default_manager: Optional[EngineManager] = None


def compute_inertia(spec: FamilySpec, engine: Union[str, EngineKind] = EngineKind.AUTO,
                    **kwargs) -> InertiaResult:
    """
    计算 FamilySpec 所描述矩阵的惯性

    Args:
        spec: 矩阵族描述
        engine: "exact" / "float" / "auto"
        **kwargs: 传给浮点引擎的 policy、expected、snap
    """
    global _default_manager
    if _default_manager is None:
        _default_manager = EngineManager()
    return _default_manager.compute(spec, engine, **kwargs)


def make_spec(family: Union[str, Family], points, r: Any = None, second_points=None) -> FamilySpec:
    """便捷构造 FamilySpec"""
    return FamilySpec(Family.parse(family), points, Exponent.of(r) if r is not None else None,
                      second_points)
