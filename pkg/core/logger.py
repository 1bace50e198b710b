"""
日志管理器
标准化日志格式、文件管理、不同级别输出
控制台输出走 stderr，stdout 留给 CSV / JSON 结果
"""

import json
import logging
import logging.handlers
import sys
import traceback
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

import colorlog

PACKAGE_LOGGERS = ("core", "framework", "matrix_lib", "kwonglab")


class LoggerManager:
    """统一日志管理器"""

    def __init__(self, name: str = "kwonglab", log_dir: str = "logs",
                 config: Optional[Dict[str, Any]] = None):
        """
        初始化日志管理器

        Args:
            name: 日志器名称前缀
            log_dir: 日志目录
            config: 日志配置（config.yaml 的 logging 部分）
        """
        self.name = name
        self.config = config or {}
        self.log_dir = Path(self.config.get("log_dir", log_dir))
        self.loggers: Dict[str, logging.Logger] = {}

        self.default_config = {
            'level': 'WARNING',
            'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            'date_format': '%Y-%m-%d %H:%M:%S',
            'file_max_size': 10 * 1024 * 1024,  # 10MB
            'file_backup_count': 5,
            'console_output': True,
            'file_output': False,
            'colored_output': True,
        }
        self.effective_config = {**self.default_config, **self.config}

        if self.effective_config['file_output']:
            self.log_dir.mkdir(parents=True, exist_ok=True)

    def _level(self, config: Dict[str, Any]) -> int:
        return getattr(logging, str(config['level']).upper(), logging.WARNING)

    def _build_handlers(self, logger_name: str, config: Dict[str, Any]):
        handlers = []
        plain = logging.Formatter(fmt=config['format'], datefmt=config['date_format'])

        if config['console_output']:
            console_handler = logging.StreamHandler(sys.stderr)
            if config['colored_output'] and sys.stderr.isatty():
                console_handler.setFormatter(colorlog.ColoredFormatter(
                    fmt='%(log_color)s' + config['format'],
                    datefmt=config['date_format'],
                    log_colors={
                        'DEBUG': 'cyan',
                        'INFO': 'green',
                        'WARNING': 'yellow',
                        'ERROR': 'red',
                        'CRITICAL': 'purple',
                    },
                ))
            else:
                console_handler.setFormatter(plain)
            handlers.append(console_handler)

        if config['file_output']:
            stamp = datetime.now().strftime('%Y%m%d')
            file_handler = logging.handlers.RotatingFileHandler(
                self.log_dir / f"{logger_name}_{stamp}.log",
                maxBytes=config['file_max_size'],
                backupCount=config['file_backup_count'],
                encoding='utf-8',
            )
            file_handler.setFormatter(plain)
            handlers.append(file_handler)

            error_handler = logging.handlers.RotatingFileHandler(
                self.log_dir / f"{logger_name}_error_{stamp}.log",
                maxBytes=config['file_max_size'],
                backupCount=config['file_backup_count'],
                encoding='utf-8',
            )
            error_handler.setLevel(logging.ERROR)
            error_handler.setFormatter(plain)
            handlers.append(error_handler)

        return handlers

    def create_logger(self, logger_name: str,
                      custom_config: Optional[Dict[str, Any]] = None) -> logging.Logger:
        """
        创建日志器并挂载处理器

        Args:
            logger_name: 日志器名称（包名或 kwonglab.xxx）
            custom_config: 覆盖配置

        Returns:
            配置好的日志器
        """
        if logger_name in self.loggers:
            return self.loggers[logger_name]

        config = {**self.effective_config, **(custom_config or {})}
        logger = logging.getLogger(logger_name)
        logger.setLevel(self._level(config))
        logger.handlers.clear()
        logger.propagate = False
        for handler in self._build_handlers(logger_name.replace('.', '_'), config):
            logger.addHandler(handler)

        self.loggers[logger_name] = logger
        logger.debug(f"📝 日志器初始化完成: {logger_name}")
        return logger

    def setup_package_loggers(self) -> Dict[str, logging.Logger]:
        """为各包的顶层日志器挂载处理器，模块级 getLogger(__name__) 自动继承"""
        return {name: self.create_logger(name) for name in PACKAGE_LOGGERS}

    def set_log_level(self, level: str):
        """动态设置全部已创建日志器的级别"""
        for logger in self.loggers.values():
            logger.setLevel(getattr(logging, level.upper()))

    def log_event(self, logger: logging.Logger, event_type: str, data: Dict[str, Any]):
        """
        记录验证事件

        Args:
            logger: 日志器
            event_type: 事件类型 ('case', 'transition', 'summary', 'error')
            data: 事件数据
        """
        level = logging.ERROR if event_type == 'error' else logging.INFO

        if event_type == 'case':
            message = (f"🧪 用例 | {data.get('family', 'N/A')} | r={data.get('r', 'N/A')} | "
                       f"{data.get('status', 'N/A')} | 惯性: {data.get('inertia', 'N/A')}")
        elif event_type == 'transition':
            message = f"🔀 惯性跳变 | r≈{data.get('location', 'N/A')} | {data.get('before')} → {data.get('after')}"
        elif event_type == 'summary':
            message = f"📊 验证汇总 | 通过 {data.get('passed', 0)} / 共 {data.get('total', 0)}"
        else:
            message = f"📋 事件 | {event_type} | {json.dumps(data, ensure_ascii=False, default=str)}"

        logger.log(level, message)
        self._log_structured_data(event_type, {
            'timestamp': datetime.now().isoformat(),
            'event_type': event_type,
            **data,
        })

    def _log_structured_data(self, event_type: str, data: Dict[str, Any]):
        """记录结构化数据到 JSONL 文件"""
        if not self.effective_config['file_output']:
            return
        json_log_file = self.log_dir / f"structured_{event_type}_{datetime.now().strftime('%Y%m%d')}.jsonl"
        try:
            with open(json_log_file, 'a', encoding='utf-8') as f:
                f.write(json.dumps(data, ensure_ascii=False, default=str) + '\n')
        except OSError as e:
            logging.getLogger(__name__).warning(f"结构化日志记录失败: {e}")

    def log_exception(self, logger: logging.Logger, exception: Exception, context: str = None):
        """
        记录异常信息

        Args:
            logger: 日志器
            exception: 异常对象
            context: 上下文信息
        """
        logger.error(f"💥 异常发生 | {context or 'Unknown'} | {type(exception).__name__}: {exception}")
        self._log_structured_data('exception', {
            'exception_type': type(exception).__name__,
            'exception_message': str(exception),
            'traceback': traceback.format_exc(),
            'context': context or 'Unknown',
        })

    def __str__(self):
        return f"LoggerManager({self.name}, loggers={len(self.loggers)})"

    def __repr__(self):
        return self.__str__()


def setup_logging(config: Optional[Dict[str, Any]] = None,
                  level: Optional[str] = None) -> LoggerManager:
    """按配置初始化包日志器，返回管理器"""
    merged = dict(config or {})
    if level:
        merged['level'] = level
    manager = LoggerManager(config=merged)
    manager.setup_package_loggers()
    return manager
