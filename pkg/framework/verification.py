"""
惯性验证器
在 (节点, r) 网格上用所选引擎计算惯性并与闭式预测逐一比对，输出 PASS/FAIL 报告
"""

import io
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import pandas as pd

from core.domain import Exponent, Family, FamilySpec, Inertia, Points, validate_points
from core.exceptions import NumericalError, ValidationError
from core.logger import LoggerManager

from .engine_manager import EngineKind, compute_inertia
from .oracle import predict_absdiff_inertia, predict_kwong_inertia

logger = logging.getLogger(__name__)

VERIFY_FAMILIES = (Family.KWONG, Family.POWER_ABS_DIFF)


def random_rational_points(rng: random.Random, n: int, high: int = 40,
                           denominators: Sequence[int] = (1, 2, 3)) -> Points:
    """可复现的随机有理节点：分子取自 1..high，分母取自 denominators"""
    values = set()
    while len(values) < n:
        values.add(Fraction(rng.randint(1, high), rng.choice(list(denominators))))
    return validate_points(sorted(values))


@dataclass(frozen=True)
class CaseResult:
    """单个用例的结果"""

    family: Family
    points: Points
    r: Exponent
    engine: str
    computed: Optional[Inertia]
    predicted: Inertia
    case_tag: str
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.computed == self.predicted

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family.label,
            "points": self.points.to_text(),
            "r": self.r.to_json(),
            "engine": self.engine,
            "computed": self.computed.to_list() if self.computed else None,
            "predicted": self.predicted.to_list(),
            "caseTag": self.case_tag,
            "status": self.status,
            "error": self.error,
        }


@dataclass
class VerificationReport:
    """验证报告"""

    cases: List[CaseResult] = field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.cases)

    @property
    def passed(self) -> int:
        return sum(1 for case in self.cases if case.passed)

    @property
    def all_passed(self) -> bool:
        return self.passed == self.total

    def summary(self) -> Dict[str, Any]:
        return {"total": self.total, "passed": self.passed, "failed": self.total - self.passed,
                "allPassed": self.all_passed}

    def to_dict(self) -> Dict[str, Any]:
        return {"cases": [case.to_dict() for case in self.cases], "summary": self.summary()}

    def to_csv(self) -> str:
        columns = ["family", "points", "r", "engine", "computed", "predicted", "caseTag", "status", "error"]
        rows = []
        for case in self.cases:
            data = case.to_dict()
            data["computed"] = " ".join(map(str, data["computed"])) if data["computed"] else ""
            data["predicted"] = " ".join(map(str, data["predicted"]))
            data["error"] = data["error"] or ""
            rows.append([data[c] for c in columns])
        buffer = io.StringIO()
        pd.DataFrame(rows, columns=columns).to_csv(buffer, index=False, lineterminator="\n")
        return buffer.getvalue()


def _predict(family: Family, n: int, r: Exponent) -> Tuple[Inertia, str]:
    if family is Family.POWER_ABS_DIFF:
        case = predict_kwong_inertia(n, r.shifted(1))
        return predict_absdiff_inertia(n, r), case.case_tag
    case = predict_kwong_inertia(n, r)
    return case.inertia, case.case_tag


def verify_case(family: Family, points: Points, r: Exponent, engine: str) -> List[CaseResult]:
    """
    验证单个 (节点, r)

    engine 为 "both" 时同时运行精确与浮点引擎（精确引擎不可用时只运行浮点引擎）
    """
    predicted, tag = _predict(family, points.n, r)
    spec = FamilySpec(family, points, r)
    if engine == "both":
        engines = ["float"]
        if points.is_exact and r.is_exact and r.is_integer:
            engines.insert(0, "exact")
    else:
        engines = [engine]

    results = []
    for name in engines:
        try:
            result = compute_inertia(spec, name)
            results.append(CaseResult(family, points, r, result.engine.value, result.inertia, predicted, tag))
        except NumericalError as exc:
            results.append(CaseResult(family, points, r, name, None, predicted, tag,
                                      error=f"{exc.error_name}: {exc.detail}"))
    return results


def _verify_task(task: Tuple[Family, Points, Exponent, str]) -> List[CaseResult]:
    return verify_case(*task)


class InertiaVerifier:
    """
    惯性验证器
    网格可并行求值，结果始终按网格顺序汇总
    """

    def __init__(self, family: Union[str, Family] = Family.KWONG, engine: str = "auto",
                 jobs: int = 1, logger_manager: Optional[LoggerManager] = None):
        self.family = Family.parse(family)
        if self.family not in VERIFY_FAMILIES:
            raise ValidationError(f"验证仅支持 Kwong 与 PowerAbsDiff 族: {self.family.label}")
        if engine not in ("exact", "float", "auto", "both"):
            raise ValidationError(f"未知引擎: {engine}")
        if engine != "both":
            EngineKind.parse(engine)
        self.engine = engine
        self.jobs = max(1, int(jobs))
        self.logger_manager = logger_manager
        self.logger = logging.getLogger("kwonglab.verify")

    def run(self, point_sets: Sequence[Points], r_values: Sequence[Exponent]) -> VerificationReport:
        """
        Args:
            point_sets: 节点集合列表
            r_values: 指数列表

        Returns:
            VerificationReport
        """
        tasks = [(self.family, points, r, self.engine) for points in point_sets for r in r_values]
        if self.jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                batches = list(pool.map(_verify_task, tasks))
        else:
            batches = [_verify_task(task) for task in tasks]

        report = VerificationReport([case for batch in batches for case in batch])
        for case in report.cases:
            if not case.passed:
                self.logger.warning(f"❌ FAIL {case.family.label} p=({case.points.to_text()}) r={case.r} "
                                    f"computed={case.computed} predicted={case.predicted} {case.error or ''}")
            if self.logger_manager is not None:
                self.logger_manager.log_event(self.logger, 'case', {
                    'family': case.family.label, 'r': str(case.r), 'status': case.status,
                    'inertia': str(case.computed),
                })
        if self.logger_manager is not None:
            self.logger_manager.log_event(self.logger, 'summary', report.summary())
        return report
