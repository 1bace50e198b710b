"""
运行配置
CLI 各子命令共享的参数模型，负责跨字段校验
"""

import math
from fractions import Fraction
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator, model_validator
from pydantic import ValidationError as PydanticValidationError

from .domain import Exponent, Points, is_exact_scalar, validate_points
from .exceptions import BadExponentError, ExactModeUnsupportedError, KwongLabError, ValidationError

EngineName = Literal["exact", "float", "auto", "both"]
FormatName = Literal["csv", "json"]


def parse_r_grid(text: str) -> List[Exponent]:
    """
    解析 "start:stop:step" 网格（含端点）

    三个量都是有理数字面量时按精确有理数生成，否则按浮点生成
    """
    parts = [part.strip() for part in text.split(":")]
    if len(parts) != 3:
        raise BadExponentError(f"r 网格格式应为 start:stop:step: {text}")
    if all(is_exact_scalar(part) for part in parts):
        start, stop, step = (Fraction(part) for part in parts)
    else:
        start, stop, step = (float(part) for part in parts)
    if step <= 0 or stop < start:
        raise BadExponentError(f"r 网格无效: {text}")
    if isinstance(step, Fraction):
        count = math.floor((stop - start) / step) + 1
    else:
        count = math.floor((stop - start) / step + 1e-9) + 1
    return [Exponent.of(start + i * step) for i in range(count)]


def build_run_config(**kwargs) -> "RunConfig":
    """
    构造 RunConfig，并把 pydantic 包装的领域异常还原为原始异常
    """
    try:
        return RunConfig(**kwargs)
    except PydanticValidationError as exc:
        for error in exc.errors():
            original = (error.get("ctx") or {}).get("error")
            if isinstance(original, KwongLabError):
                raise original from None
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first.get("loc", ()))
        raise ValidationError(f"{location}: {first.get('msg')}") from None


class RunConfig(BaseModel):
    """子命令运行配置"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    subcommand: str
    points: Optional[Points] = None
    n: Optional[int] = Field(default=None, ge=1)
    r_values: List[Exponent] = Field(default_factory=list)
    engine: EngineName = "auto"
    format: FormatName = "json"
    seed: int = 0
    explain: bool = False
    jobs: int = Field(default=1, ge=1)

    @field_validator("points", mode="before")
    @classmethod
    def _coerce_points(cls, value):
        if value is None or isinstance(value, Points):
            return value
        if isinstance(value, str):
            return Points.from_text(value)
        return validate_points(value)

    @field_validator("n")
    @classmethod
    def _n_matches_points(cls, value: Optional[int], info: ValidationInfo):
        points = info.data.get("points")
        if value is not None and points is not None and points.n != value:
            raise ValidationError(f"--n={value} 与节点个数 {points.n} 不一致")
        return value

    @model_validator(mode="after")
    def _exact_requirements(self):
        if self.engine == "exact":
            if self.points is not None and not self.points.is_exact:
                raise ExactModeUnsupportedError("精确引擎需要有理节点")
            bad = [str(r) for r in self.r_values if not (r.is_exact and r.is_integer)]
            if bad:
                raise ExactModeUnsupportedError(f"精确引擎需要整数 r: {', '.join(bad)}")
        return self

    @property
    def order(self) -> int:
        if self.points is not None:
            return self.points.n
        if self.n is None:
            raise ValidationError("需要 --points 或 --n")
        return self.n

    def resolved_points(self) -> Points:
        """未给出节点时使用 1..n"""
        if self.points is not None:
            return self.points
        return validate_points(list(range(1, self.order + 1)))
