"""
异常体系
所有领域错误统一继承 KwongLabError，携带稳定的错误名称与详情，
便于 CLI 以 JSON 形式输出 {error, detail}
"""

from typing import Any, Dict, Optional


class KwongLabError(Exception):
    """KwongLab 错误基类"""

    error_name = "KwongLabError"

    def __init__(self, detail: str = ""):
        super().__init__(detail)
        self.detail = detail

    def to_dict(self) -> Dict[str, Any]:
        """转换为机器可读的错误对象"""
        return {"error": self.error_name, "detail": self.detail}


# ---------------------------------------------------------------- 输入校验类

class ValidationError(KwongLabError, ValueError):
    """输入校验失败"""
    error_name = "ValidationError"


class DuplicatePointError(ValidationError):
    error_name = "DuplicatePoint"


class NonpositivePointError(ValidationError):
    error_name = "NonpositivePoint"


class ExactModeUnsupportedError(ValidationError):
    """精确模式下请求了无法精确表示的构造（如非整数指数）"""
    error_name = "ExactModeUnsupported"


class ScalarModeMismatchError(ValidationError):
    """标量模式混用"""
    error_name = "ScalarModeMismatch"


class NonpositiveExponentError(ValidationError):
    error_name = "NonpositiveExponent"


class LengthMismatchError(ValidationError):
    error_name = "LengthMismatch"


class BadExponentError(ValidationError):
    error_name = "BadExponent"


class IndexOutOfRangeError(ValidationError, IndexError):
    error_name = "IndexOutOfRange"


class RankDeficientError(ValidationError):
    error_name = "RankDeficient"


class DepthOutOfRangeError(ValidationError):
    error_name = "DepthOutOfRange"


class AllZeroWeightsError(ValidationError):
    error_name = "AllZeroWeights"


class PreconditionViolatedError(ValidationError):
    error_name = "PreconditionViolated"


class OrderTooLargeError(ValidationError):
    error_name = "OrderTooLarge"


class ConfigError(ValidationError):
    error_name = "ConfigError"


# ---------------------------------------------------------------- 数值计算类

class NumericalError(KwongLabError, ArithmeticError):
    """数值计算失败"""
    error_name = "NumericalError"


class NoConvergenceError(NumericalError):
    """Jacobi 迭代在最大扫描次数内未收敛，附带当前最优特征值"""

    error_name = "NoConvergence"

    def __init__(self, detail: str, best_eigenvalues: Optional[list] = None):
        super().__init__(detail)
        self.best_eigenvalues = list(best_eigenvalues or [])


class AmbiguousNullityError(NumericalError):
    """给定的零特征值个数与谱间隙不一致，附带分类报告"""

    error_name = "AmbiguousNullity"

    def __init__(self, detail: str, report: Any = None):
        super().__init__(detail)
        self.report = report
