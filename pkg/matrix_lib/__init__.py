"""
KwongLab 矩阵库 - 结构化矩阵族的生成、结构恒等式与符号分析

使用示例:
    from matrix_lib import generators, structure, signs
    from core.domain import Points

    points = Points.from_text("1,2,5,10")
    k3 = generators.gen_kwong(points, 3)
    check = structure.verify_vandermonde_factorization(points, 3)
"""

# generators 必须先于 structure 与 signs 导入
from . import generators
from . import structure
from . import signs

from core.domain import Family

__version__ = "1.0.0"
__author__ = "KwongLab Team"

# 矩阵族映射字典 - 用于按名称动态调用
FAMILY_MAP = {
    Family.KWONG: generators.gen_kwong,
    Family.LOEWNER: generators.gen_loewner,
    Family.POWER_ABS_DIFF: generators.gen_power_absdiff,
    Family.COSH_KWONG: generators.gen_cosh_kwong_from_points,
    Family.CAUCHY: generators.gen_cauchy,
    Family.CROSS_KWONG: generators.gen_cross_kwong,
    Family.POWER_SUM: generators.gen_power_sum,
}

# 有闭式惯性预测的族
PREDICTED_FAMILIES = [Family.KWONG, Family.POWER_ABS_DIFF, Family.LOEWNER]
SYMMETRIC_FAMILIES = [family for family in FAMILY_MAP if family is not Family.CROSS_KWONG]


def get_family(name):
    """
    根据名称获取生成函数

    Args:
        name: 族名称，如 "kwong"、"absdiff"

    Returns:
        生成函数

    Example:
        gen = get_family("kwong")
        matrix = gen(points, 3)
    """
    return FAMILY_MAP[Family.parse(name)]


def list_families(symmetric_only: bool = False):
    """列出可用的矩阵族名称"""
    families = SYMMETRIC_FAMILIES if symmetric_only else list(FAMILY_MAP)
    return [family.value for family in families]


__all__ = [
    "generators", "structure", "signs",
    "get_family", "list_families",
    "FAMILY_MAP", "PREDICTED_FAMILIES", "SYMMETRIC_FAMILIES",
]
