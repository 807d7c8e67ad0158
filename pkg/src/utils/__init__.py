"""
Shared utilities: logging, environment helpers, input validation, batch execution.
"""
from .smart_logger import CWFAError, get_logger, get_smart_logger, log_performance
from .env_helpers import env_bool, env_float, env_int, env_str, resolve_path
from .validators import parse_code_tokens, parse_int_set, parse_label_value, validate_labels


__all__ = [
    'CWFAError', 'get_logger', 'get_smart_logger', 'log_performance',
    'env_str', 'env_int', 'env_float', 'env_bool', 'resolve_path',
    'parse_int_set', 'parse_code_tokens', 'parse_label_value', 'validate_labels',
]
