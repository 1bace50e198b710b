"""
配置管理器
统一管理 config/ 下的 YAML 配置，支持环境变量替换、多环境覆盖与结构校验
"""

import copy
import logging
import os
import re
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from dotenv import load_dotenv

from .exceptions import ConfigError

PROJECT_ROOT = Path(__file__).resolve().parent.parent
DEFAULT_CONFIG_DIR = PROJECT_ROOT / "config"

ENV_VAR_ENVIRONMENT = "KWONG_ENV"

# 各引擎的数值策略默认值，与配置文件中的默认值一致
DEFAULT_CONFIG: Dict[str, Any] = {
    "runtime": {
        "jobs": 1,
        "engine": "auto",
        "exact_max_order": 10,
    },
    "float_engine": {
        "threshold_factor": 64,
        "gap_requirement": 1000.0,
        "sweep_tol": 1e-15,
        "max_sweeps": 60,
        "jacobi_max_order": 16,
        "cosh_ratio_limit": 1000.0,
        "cosh_exponent_limit": 20.0,
        "interlacing_factor": 8,
    },
    "signs": {
        "zero_deadband": 1e-12,
        "scan_samples": 4096,
        "bisect_rtol": 1e-12,
        "mp_dps": 50,
        "det_floor": 1e-30,
        "max_ssr_order": 8,
    },
    "sweep": {
        "singular_tol": 1e-9,
        "refine_tol": 1e-3,
    },
    "logging": {
        "level": "WARNING",
        "console_output": True,
        "file_output": False,
        "colored_output": True,
        "log_dir": "logs",
    },
}

REQUIRED_SECTIONS = ("runtime", "float_engine", "signs", "sweep", "logging")


def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """递归合并字典，override 优先"""
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


class ConfigManager:
    """统一配置管理器"""

    def __init__(self, config_dir: Optional[str] = None, environment: Optional[str] = None,
                 logger: Optional[logging.Logger] = None, load_env_file: bool = True):
        """
        初始化配置管理器

        Args:
            config_dir: 配置文件目录，默认为项目 config/
            environment: 环境名（development / testing / production），
                         默认读取 KWONG_ENV，再退回 development
            logger: 日志记录器
            load_env_file: 是否加载项目根目录的 .env
        """
        self.config_dir = Path(config_dir) if config_dir else DEFAULT_CONFIG_DIR
        self.logger = logger or logging.getLogger(__name__)
        self.env_pattern = re.compile(r'\$\{([^}]+)\}')
        self._cache: Optional[Dict[str, Any]] = None

        if load_env_file:
            # 不覆盖已存在的环境变量
            load_dotenv(PROJECT_ROOT / ".env", override=False)

        self.environment = environment or os.getenv(ENV_VAR_ENVIRONMENT, "development")
        self.logger.debug(f"📁 初始化配置管理器: {self.config_dir} (env={self.environment})")

    def _replace_env_vars(self, value: Any) -> Any:
        """
        递归替换配置中的环境变量

        支持 ${VAR} 与 ${VAR:default}；整个标量都是占位符时按 YAML 重新解析类型
        """
        if isinstance(value, str):
            def replace_match(match):
                env_var = match.group(1)
                if ':' in env_var:
                    var_name, default_value = env_var.split(':', 1)
                    return os.getenv(var_name.strip(), default_value.strip())
                env_value = os.getenv(env_var.strip())
                if env_value is None:
                    self.logger.warning(f"⚠️ 环境变量未设置: {env_var}")
                    return match.group(0)
                return env_value

            replaced = self.env_pattern.sub(replace_match, value)
            if replaced != value and self.env_pattern.fullmatch(value.strip()):
                try:
                    return yaml.safe_load(replaced)
                except yaml.YAMLError:
                    return replaced
            return replaced

        if isinstance(value, dict):
            return {k: self._replace_env_vars(v) for k, v in value.items()}

        if isinstance(value, list):
            return [self._replace_env_vars(item) for item in value]

        return value

    def _read_yaml(self, path: Path) -> Dict[str, Any]:
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = yaml.safe_load(f) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"配置文件解析失败: {path} - {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"配置文件顶层必须为映射: {path}")
        return data

    def _validate_config_structure(self, config: Dict[str, Any]) -> None:
        missing = [section for section in REQUIRED_SECTIONS if not isinstance(config.get(section), dict)]
        if missing:
            raise ConfigError(f"配置缺少必需部分: {missing}")

        jobs = config["runtime"].get("jobs")
        if not isinstance(jobs, int) or jobs < 1:
            raise ConfigError(f"runtime.jobs 必须为正整数: {jobs!r}")
        engine = config["runtime"].get("engine")
        if engine not in ("exact", "float", "auto"):
            raise ConfigError(f"runtime.engine 无效: {engine!r}")

    def load_config(self, reload: bool = False) -> Dict[str, Any]:
        """
        加载 config.yaml 并叠加环境配置

        Returns:
            合并、替换、校验后的配置字典（副本）
        """
        if self._cache is not None and not reload:
            return copy.deepcopy(self._cache)

        config = copy.deepcopy(DEFAULT_CONFIG)
        base_file = self.config_dir / "config.yaml"
        if base_file.exists():
            config = deep_merge(config, self._read_yaml(base_file))
        else:
            self.logger.debug(f"⚠️ 未找到 {base_file}，使用内置默认配置")

        env_file = self.config_dir / "environments" / f"{self.environment}.yaml"
        if env_file.exists():
            config = deep_merge(config, self._read_yaml(env_file))
        elif self.environment != "development":
            raise ConfigError(f"环境配置不存在: {self.environment}")

        config = self._replace_env_vars(config)
        self._validate_config_structure(config)
        config["_meta"] = {
            "environment": self.environment,
            "config_dir": str(self.config_dir),
        }

        self._cache = config
        self.logger.debug(f"✅ 配置加载成功: {self.environment}")
        return copy.deepcopy(config)

    def get(self, key_path: str, default: Any = None) -> Any:
        """
        获取配置中的特定值

        Args:
            key_path: 键路径，用点分隔 (如: 'float_engine.threshold_factor')
            default: 默认值
        """
        value: Any = self.load_config()
        for key in key_path.split('.'):
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default
        return value

    def list_environments(self) -> List[str]:
        env_dir = self.config_dir / "environments"
        return sorted(p.stem for p in env_dir.glob("*.yaml")) if env_dir.exists() else []


_default_manager: Optional[ConfigManager] = None


def get_config_manager() -> ConfigManager:
    """进程内共享的配置管理器"""
    global _default_manager
    if _default_manager is None:
        _default_manager = ConfigManager()
    return _default_manager


def set_config_manager(manager: Optional[ConfigManager]) -> None:
    """替换进程内共享的配置管理器（CLI 的 --env 与测试使用）"""
    global _default_manager
    _default_manager = manager


def get_setting(key_path: str, default: Any = None) -> Any:
    """读取配置值；配置不可用时返回内置默认值"""
    try:
        return get_config_manager().get(key_path, default)
    except ConfigError:
        value: Any = DEFAULT_CONFIG
        for key in key_path.split('.'):
            if not isinstance(value, dict) or key not in value:
                return default
            value = value[key]
        return value
