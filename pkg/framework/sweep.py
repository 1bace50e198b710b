"""
特征值轨迹扫描
在 r 网格上追踪矩阵族的特征值与惯性，检测惯性跳变并二分细化位置
"""

import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from core.config_manager import get_setting
from core.domain import Exponent, Family, FamilySpec, Inertia, Points
from core.exceptions import ValidationError

from .engine_manager import FloatInertiaEngine
from .float_engine import RoutePolicy

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepRecord:
    """网格上的一个点"""

    r: float
    eigenvalues: Tuple[float, ...]
    inertia: Inertia
    route: str
    snapped: bool
    spec: FamilySpec

    def to_dict(self) -> Dict[str, Any]:
        return {
            "r": self.r,
            "eigenvalues": list(self.eigenvalues),
            "inertia": self.inertia.to_list(),
            "route": self.route,
            "snapped": self.snapped,
        }


@dataclass(frozen=True)
class TransitionReport:
    """相邻网格点之间的惯性跳变"""

    bracket: Tuple[float, float]
    inertia_before: Inertia
    inertia_after: Inertia
    location: float
    width: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bracket": list(self.bracket),
            "inertiaBefore": self.inertia_before.to_list(),
            "inertiaAfter": self.inertia_after.to_list(),
            "refinedLocation": self.location,
            "width": self.width,
        }


def _evaluate(spec: FamilySpec, policy: str) -> SweepRecord:
    result = FloatInertiaEngine().compute(spec, policy=policy)
    report = result.spectrum
    return SweepRecord(
        r=float(spec.r),
        eigenvalues=tuple(float(v) for v in report.eigenvalues),
        inertia=result.inertia,
        route=report.conditioning_route.value,
        snapped=result.snapped_r is not None,
        spec=spec,
    )


def _evaluate_task(task: Tuple[FamilySpec, str]) -> SweepRecord:
    return _evaluate(*task)


def sweep_values(points: Points, rs: Sequence[float], engine_policy: Union[str, RoutePolicy] = "auto",
                 family: Union[str, Family] = Family.KWONG, jobs: int = 1) -> List[SweepRecord]:
    """
    在给定 r 值序列上求值，输出保持输入顺序
    """
    family = Family.parse(family)
    if family is Family.CROSS_KWONG:
        raise ValidationError("交叉 Kwong 矩阵不支持扫描")
    policy = RoutePolicy.parse(engine_policy).value
    tasks = [(FamilySpec(family, points, Exponent.of(float(r))), policy) for r in rs]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_evaluate_task, tasks))
    else:
        records = [_evaluate_task(task) for task in tasks]
    logger.debug(f"扫描完成: {family.label} n={points.n} 网格点 {len(records)}")
    return records


def sweep_inertia(points: Points, r_min: float, r_max: float, steps: int,
                  engine_policy: Union[str, RoutePolicy] = "auto",
                  family: Union[str, Family] = Family.KWONG, jobs: int = 1) -> List[SweepRecord]:
    """
    均匀网格扫描（含端点）

    Args:
        points: 节点
        r_min, r_max: 网格端点，r_min < r_max
        steps: 网格点数 ≥ 2
        engine_policy: 条件化路线策略
        family: 矩阵族
        jobs: 并行进程数
    """
    if not r_min < r_max:
        raise ValidationError(f"需要 r_min < r_max: {r_min}, {r_max}")
    if steps < 2:
        raise ValidationError(f"网格点数至少为 2: {steps}")
    grid = np.linspace(float(r_min), float(r_max), int(steps))
    return sweep_values(points, grid.tolist(), engine_policy, family, jobs)


def _refine(template: FamilySpec, lo: float, hi: float, before: Inertia,
            refine_tol: float, policy: str) -> Tuple[float, float]:
    # 按惯性变化二分，不依赖单个特征值的符号
    engine = FloatInertiaEngine()
    while hi - lo >= refine_tol:
        mid = 0.5 * (lo + hi)
        spec = template.with_r(mid)
        result = engine.compute(spec, policy=policy)
        if result.snapped_r is not None:
            return mid, 0.0
        if result.inertia == before:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), 0.5 * (hi - lo)


def detect_transitions(records: Sequence[SweepRecord], refine_tol: Optional[float] = None,
                       engine_policy: Union[str, RoutePolicy] = "auto") -> List[TransitionReport]:
    """
    检测相邻网格点之间的惯性跳变

    吸附到奇异指数的网格点不参与比较；若它夹在两个惯性不同的普通网格点之间，
    跳变位置即该网格点，宽度为 0
    """
    refine_tol = get_setting("sweep.refine_tol", 1e-3) if refine_tol is None else refine_tol
    policy = RoutePolicy.parse(engine_policy).value
    ordered = sorted(records, key=lambda rec: rec.r)
    regular = [i for i, rec in enumerate(ordered) if not rec.snapped]
    reports: List[TransitionReport] = []

    for a, b in zip(regular, regular[1:]):
        left, right = ordered[a], ordered[b]
        if left.inertia == right.inertia:
            continue
        between = [ordered[i] for i in range(a + 1, b)]
        if between:
            location, width = between[0].r, 0.0
        else:
            location, width = _refine(left.spec, left.r, right.r, left.inertia, refine_tol, policy)
        reports.append(TransitionReport((left.r, right.r), left.inertia, right.inertia, location, width))
        logger.debug(f"惯性跳变 r≈{location}: {left.inertia} → {right.inertia}")
    return reports


def emit_trajectory(records: Sequence[SweepRecord]) -> str:
    """
    轨迹 CSV：表头 r,lambda_1,...,lambda_n,pi,zeta,nu，每个网格点一行，按 r 升序
    """
    ordered = sorted(records, key=lambda rec: rec.r)
    n = len(ordered[0].eigenvalues) if ordered else 0
    columns = ["r"] + [f"lambda_{i}" for i in range(1, n + 1)] + ["pi", "zeta", "nu"]
    rows = [[rec.r, *rec.eigenvalues, *rec.inertia.as_tuple()] for rec in ordered]
    frame = pd.DataFrame(rows, columns=columns)
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()


def sweep_to_dict(records: Sequence[SweepRecord],
                  transitions: Sequence[TransitionReport]) -> Dict[str, Any]:
    return {
        "records": [rec.to_dict() for rec in sorted(records, key=lambda rec: rec.r)],
        "transitions": [t.to_dict() for t in transitions],
    }
