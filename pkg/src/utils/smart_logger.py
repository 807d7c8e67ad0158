"""
Smart logging
- one logger per channel (system/fit/selection/simulate/storage/cli/error/performance)
- JSON lines on disk with rotation, optional colored console output on stderr
- per-function timing and error codes
"""
from __future__ import annotations

import inspect
import json
import logging
import os
import sys
import time
import traceback
from collections import defaultdict
from datetime import datetime, timezone
from functools import wraps
from logging.handlers import RotatingFileHandler, TimedRotatingFileHandler
from pathlib import Path
from threading import Lock
from types import FrameType
from typing import Any, Dict, NamedTuple, Optional

from utils.env_helpers import env_bool, env_str, resolve_path

_MB = 1024 * 1024


class ChannelSpec(NamedTuple):
    name: str
    max_bytes: int  # 0 = rotate at midnight
    backups: int


CHANNELS = (
    ChannelSpec('system', 0, 30),
    ChannelSpec('fit', 20 * _MB, 5),
    ChannelSpec('selection', 20 * _MB, 5),
    ChannelSpec('simulate', 10 * _MB, 3),
    ChannelSpec('storage', 10 * _MB, 3),
    ChannelSpec('cli', 10 * _MB, 5),
    ChannelSpec('error', 10 * _MB, 5),
    ChannelSpec('performance', 20 * _MB, 3),
)
ERROR_PREFIXES = {
    'system': 'E10',
    'fit': 'E20',
    'selection': 'E30',
    'error': 'E40',
    'performance': 'E50',
    'simulate': 'E60',
    'cli': 'E70',
    'storage': 'E80',
}
_error_counters: Dict[str, int] = defaultdict(int)
_counter_lock = Lock()


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime('%Y-%m-%d %H:%M:%S')


def next_error_code(channel: str) -> str:
    """Channel prefix plus a per-process sequence number, e.g. E2003."""
    with _counter_lock:
        _error_counters[channel] += 1
        seq = _error_counters[channel]
    return f"{ERROR_PREFIXES.get(channel, 'E99')}{seq:02d}"


def _record_error_code(record: logging.LogRecord, channel: str) -> Optional[str]:
    if record.levelno < logging.ERROR:
        return None
    code = getattr(record, 'error_code', None) or next_error_code(channel)
    record.error_code = code
    return code


def _caller(frame: Optional[FrameType], skip_init: bool = False) -> Optional[FrameType]:
    caller = frame.f_back if frame else None
    while skip_init and caller is not None and caller.f_code.co_name == '__init__':
        caller = caller.f_back
    return caller


class StructuredLogFormatter(logging.Formatter):
    """One JSON object per line."""

    def __init__(self, channel: str = 'system'):
        super().__init__()
        self.channel = channel

    def format(self, record: logging.LogRecord) -> str:
        entry: Dict[str, Any] = {
            'timestamp': _utc_now(),
            'level': record.levelname,
            'module': self.channel,
            'function': record.funcName,
            'file': record.pathname,
            'line': record.lineno,
            'message': record.getMessage(),
        }
        code = _record_error_code(record, self.channel)
        if code:
            entry['error_code'] = code
        context = getattr(record, 'context', None)
        if context:
            entry['context'] = context
        if record.exc_info and record.exc_info[0] is not None:
            exc_type, exc, tb = record.exc_info
            entry['exception'] = {
                'type': exc_type.__name__,
                'message': str(exc),
                'traceback': ''.join(traceback.format_exception(exc_type, exc, tb)),
            }
        return json.dumps(entry, ensure_ascii=False, default=str)


class HumanReadableFormatter(logging.Formatter):
    COLORS = {
        'DEBUG': '\033[36m',
        'INFO': '\033[32m',
        'WARNING': '\033[33m',
        'ERROR': '\033[31m',
        'CRITICAL': '\033[35m',
    }
    RESET = '\033[0m'

    def __init__(self, channel: str = 'system', use_color: bool = True):
        super().__init__()
        self.channel = channel
        self.use_color = use_color

    def format(self, record: logging.LogRecord) -> str:
        level = f"{record.levelname:8s}"
        if self.use_color and record.levelname in self.COLORS:
            level = f"{self.COLORS[record.levelname]}{level}{self.RESET}"
        tags = [self.channel]
        code = _record_error_code(record, self.channel)
        if code:
            tags.insert(0, code)
        where = f"{record.filename}:{record.lineno}:{record.funcName}"
        return f"[{_utc_now()}] {level} {' '.join(f'[{t}]' for t in tags)} [{where}] {record.getMessage()}"


class SmartLogger:
    """
    Channel loggers named `cwfa.<channel>`.

    Args:
        base_dir: log directory (created when file logging is on)
        to_file: attach rotating JSON-line file handlers
        console_level: stderr level name; empty or OFF disables the console
        slow_threshold_seconds: calls slower than this are logged on `performance`
    """

    def __init__(
        self,
        base_dir: str = "logs",
        to_file: bool = True,
        console_level: str = "WARNING",
        slow_threshold_seconds: float = 5.0,
    ):
        self.base_dir = base_dir
        self.to_file = bool(to_file)
        self.console_level = (console_level or "").upper()
        self.slow_threshold_seconds = float(slow_threshold_seconds)
        if self.to_file:
            Path(base_dir).mkdir(parents=True, exist_ok=True)
        self.loggers: Dict[str, logging.Logger] = {}
        self._stats: Dict[str, Dict[str, Any]] = {}
        self._stats_lock = Lock()
        for spec in CHANNELS:
            self.loggers[spec.name] = self._configure(spec)

    def _handlers(self, spec: ChannelSpec):
        if self.to_file:
            path = os.path.join(self.base_dir, f'{spec.name}.log')
            if spec.max_bytes:
                handler = RotatingFileHandler(path, maxBytes=spec.max_bytes, backupCount=spec.backups, encoding='utf-8')
            else:
                handler = TimedRotatingFileHandler(path, when='midnight', backupCount=spec.backups, encoding='utf-8')
            handler.setLevel(logging.INFO)
            handler.setFormatter(StructuredLogFormatter(spec.name))
            yield handler
        if self.console_level and self.console_level != 'OFF':
            console = logging.StreamHandler(sys.stderr)
            console.setLevel(getattr(logging, self.console_level, logging.WARNING))
            console.setFormatter(HumanReadableFormatter(spec.name, use_color=sys.stderr.isatty()))
            yield console

    def _configure(self, spec: ChannelSpec) -> logging.Logger:
        logger = logging.getLogger(f'cwfa.{spec.name}')
        logger.setLevel(logging.ERROR if spec.name == 'error' else logging.DEBUG)
        logger.propagate = False
        for old in list(logger.handlers):
            logger.removeHandler(old)
            old.close()
        for handler in self._handlers(spec):
            logger.addHandler(handler)
        if not logger.handlers:
            logger.addHandler(logging.NullHandler())
        return logger

    def get_logger(self, channel: str = 'system') -> logging.Logger:
        return self.loggers.get(channel, self.loggers['system'])

    def log_performance(self, func_name: str, duration: float, success: bool = True) -> None:
        with self._stats_lock:
            stats = self._stats.setdefault(
                func_name, {'total_calls': 0, 'total_time': 0.0, 'max_time': 0.0, 'errors': 0}
            )
            stats['total_calls'] += 1
            stats['total_time'] += duration
            stats['max_time'] = max(stats['max_time'], duration)
            stats['errors'] += 0 if success else 1
            calls = stats['total_calls']
            mean = stats['total_time'] / calls
        if duration > self.slow_threshold_seconds:
            self.get_logger('performance').warning(
                f"SLOW: {func_name} took {duration:.2f}s (mean {mean:.2f}s over {calls} calls)"
            )

    def get_performance_stats(self) -> Dict[str, Dict[str, Any]]:
        with self._stats_lock:
            return {name: dict(stats) for name, stats in self._stats.items()}


_instance: Optional[SmartLogger] = None
_instance_lock = Lock()


def _from_env(base_dir: Optional[str], to_file: Optional[bool], console_level: Optional[str]) -> SmartLogger:
    return SmartLogger(
        base_dir=base_dir or resolve_path(env_str("CWFA_LOG_DIR", ""), "logs"),
        to_file=env_bool("CWFA_LOG_TO_FILE", True) if to_file is None else to_file,
        console_level=env_str("CWFA_LOG_LEVEL", "WARNING") if console_level is None else console_level,
    )


def get_smart_logger() -> SmartLogger:
    """Global SmartLogger, built from CWFA_LOG_* on first use."""
    global _instance
    with _instance_lock:
        if _instance is None:
            _instance = _from_env(None, None, None)
        return _instance


def configure_logging(
    base_dir: Optional[str] = None,
    to_file: Optional[bool] = None,
    console_level: Optional[str] = None,
) -> SmartLogger:
    """Replace the global instance; options left as None come from the environment."""
    global _instance
    with _instance_lock:
        _instance = _from_env(base_dir, to_file, console_level)
        return _instance


def get_logger(channel: str = 'system') -> logging.Logger:
    return get_smart_logger().get_logger(channel)


def log_performance(func):
    """Time every call of `func`; failures are counted as errors."""
    @wraps(func)
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        ok = False
        try:
            result = func(*args, **kwargs)
            ok = True
            return result
        finally:
            get_smart_logger().log_performance(func.__name__, time.perf_counter() - start, ok)
    return wrapper


def log_error_with_context(
    message: str,
    module: str = 'system',
    context: Optional[Dict[str, Any]] = None,
    exc_info: bool = False,
    error_code: Optional[str] = None,
) -> str:
    """
    Log `message` on the `module` channel and on `error`, tagged with one code.

    Returns:
        the error code, also printed by the CLI so it can be grepped in the logs

    Example:
        code = log_error_with_context("fit failed", module="fit", context={"code": "UUCU", "G": 2})
    """
    code = error_code or next_error_code(module)
    details: Dict[str, Any] = dict(context or {})
    caller = _caller(inspect.currentframe())
    if caller is not None:
        details.setdefault('caller_function', caller.f_code.co_name)
        details.setdefault('caller_line', caller.f_lineno)
    text = f"[{code}] {message}"
    extra = {'context': details, 'error_code': code}
    get_logger(module).error(text, exc_info=exc_info, extra=extra)
    if module != 'error':
        get_logger('error').error(text, exc_info=exc_info, extra=extra)
    return code


class CWFAError(Exception):
    """
    Base library error: message, error code, channel and context, plus the
    location that raised it. `exit_code` is what a CLI command returns for it.
    """
    exit_code: int = 3
    default_module: str = 'system'

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        module: Optional[str] = None,
        context: Optional[Dict[str, Any]] = None,
    ):
        self.message = message
        self.module = module or self.default_module
        self.error_code = error_code or next_error_code(self.module)
        self.context = context or {}
        self.timestamp = _utc_now()
        origin = _caller(inspect.currentframe(), skip_init=True)
        self.file = origin.f_code.co_filename if origin else None
        self.line = origin.f_lineno if origin else None
        self.function = origin.f_code.co_name if origin else None
        super().__init__(f"[{self.error_code}] {self.message}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            'timestamp': self.timestamp,
            'error_code': self.error_code,
            'error_type': type(self).__name__,
            'module': self.module,
            'message': self.message,
            'file': self.file,
            'line': self.line,
            'function': self.function,
            'context': self.context,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2, default=str)


__all__ = [
    'CHANNELS',
    'ChannelSpec',
    'ERROR_PREFIXES',
    'SmartLogger',
    'get_smart_logger',
    'configure_logging',
    'get_logger',
    'log_performance',
    'log_error_with_context',
    'next_error_code',
    'CWFAError',
    'StructuredLogFormatter',
    'HumanReadableFormatter',
]
