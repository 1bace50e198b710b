"""
KwongLab 惯性计算框架层
精确/浮点惯性引擎、闭式预测、引擎调度、轨迹扫描与验证
"""

# 引擎
from .exact_engine import PivotLog, charpoly_exact, inertia_exact, inertia_from_charpoly, minor_exact
from .float_engine import (
    ConditioningRoute,
    RoutePolicy,
    SpectrumReport,
    check_interlacing,
    classify_inertia,
    eig_sym,
    inertia_float,
)

# 预测
from .oracle import (
    PredictionCase,
    expected_nullity,
    flip_points,
    predict_absdiff_inertia,
    predict_kwong_inertia,
    predict_loewner_inertia_partial,
    predict_singular,
)

# 调度
from .engine_manager import EngineFactory, EngineKind, EngineManager, InertiaResult, compute_inertia

# 扫描与验证
from .sweep import SweepRecord, TransitionReport, detect_transitions, emit_trajectory, sweep_inertia
from .verification import InertiaVerifier, VerificationReport

__all__ = [
    # 精确引擎
    'PivotLog',
    'inertia_exact',
    'charpoly_exact',
    'inertia_from_charpoly',
    'minor_exact',

    # 浮点引擎
    'ConditioningRoute',
    'RoutePolicy',
    'SpectrumReport',
    'eig_sym',
    'classify_inertia',
    'inertia_float',
    'check_interlacing',

    # 预测
    'PredictionCase',
    'predict_kwong_inertia',
    'predict_singular',
    'predict_absdiff_inertia',
    'predict_loewner_inertia_partial',
    'flip_points',
    'expected_nullity',

    # 调度
    'EngineKind',
    'EngineFactory',
    'EngineManager',
    'InertiaResult',
    'compute_inertia',

    # 扫描与验证
    'SweepRecord',
    'TransitionReport',
    'sweep_inertia',
    'detect_transitions',
    'emit_trajectory',
    'InertiaVerifier',
    'VerificationReport',
]

__version__ = '1.0.0'
__author__ = 'KwongLab Team'
