"""
KwongLab 核心基础设施模块
提供领域类型、异常体系、有理数线性代数、序列化、配置管理与日志管理
"""

from .config_manager import ConfigManager, get_config_manager, get_setting
from .domain import (
    Exponent,
    Family,
    FamilySpec,
    GeneralMatrix,
    Inertia,
    Points,
    ScalarMode,
    SymMatrix,
    format_scalar,
    inertia_sum_check,
    parse_scalar,
    validate_points,
)
from .exceptions import KwongLabError, NumericalError, ValidationError
from .logger import LoggerManager, setup_logging

__all__ = [
    # 基础设施
    'ConfigManager',
    'get_config_manager',
    'get_setting',
    'LoggerManager',
    'setup_logging',

    # 领域类型
    'Exponent',
    'Family',
    'FamilySpec',
    'GeneralMatrix',
    'Inertia',
    'Points',
    'ScalarMode',
    'SymMatrix',
    'format_scalar',
    'parse_scalar',
    'inertia_sum_check',
    'validate_points',

    # 异常
    'KwongLabError',
    'NumericalError',
    'ValidationError',
]

__version__ = '1.0.0'
__author__ = 'KwongLab Team'
