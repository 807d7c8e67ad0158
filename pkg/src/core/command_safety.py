"""
Command safety wrapper for CLI subcommands.

A wrapped handler never raises: library errors become their exit code (2 for
input/parameter problems, 3 for computational failures), anything else becomes
3. Failures are logged with context on the `cli` and `error` channels and a
one-line message goes to stderr; stdout stays reserved for command output.
"""
from __future__ import annotations

import argparse
import functools
import sys
import time
from typing import Any, Callable, Dict

from utils.env_helpers import env_bool
from utils.smart_logger import CWFAError, get_logger, log_error_with_context

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FAILURE = 3

_MAX_VALUE_CHARS = 200

Handler = Callable[[argparse.Namespace], int]


def _truncate_text(text: str, max_chars: int = _MAX_VALUE_CHARS) -> str:
    text = str(text)
    if len(text) <= max_chars:
        return text
    return text[:max_chars] + f"...(truncated,len={len(text)})"


def _sanitize_args(args: argparse.Namespace) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for key, value in vars(args).items():
        if callable(value):
            continue
        if value is None or isinstance(value, (bool, int, float)):
            out[key] = value
        else:
            out[key] = _truncate_text(value)
    return out


def command_safe(func: Handler) -> Handler:
    command = getattr(func, "__name__", "command")

    @functools.wraps(func)
    def wrapper(args: argparse.Namespace) -> int:
        logger = get_logger("cli")
        ctx = {"command": command, "args": _sanitize_args(args)}
        logger.info("command_start", extra={"context": ctx})
        start = time.perf_counter()
        try:
            code = func(args)
        except CWFAError as e:
            context = dict(e.context, command=command, error_type=type(e).__name__)
            log_error_with_context(e.message, module="cli", context=context, error_code=e.error_code)
            print(f"error: {e.message} [{e.error_code}]", file=sys.stderr)
            return e.exit_code
        except ValueError as e:
            log_error_with_context(str(e), module="cli", context={"command": command, "error_type": "ValueError"})
            print(f"error: {e}", file=sys.stderr)
            return EXIT_USAGE
        except KeyboardInterrupt:
            print("interrupted", file=sys.stderr)
            return EXIT_FAILURE
        except Exception as e:
            error_code = log_error_with_context(
                f"unexpected {type(e).__name__}: {e}",
                module="cli",
                context={"command": command},
                exc_info=True,
            )
            print(f"error: unexpected {type(e).__name__}: {e} [{error_code}]", file=sys.stderr)
            if env_bool("CWFA_DEBUG", False):
                raise
            return EXIT_FAILURE
        duration_ms = int((time.perf_counter() - start) * 1000)
        logger.info("command_done", extra={"context": {"command": command, "exit": code, "duration_ms": duration_ms}})
        return EXIT_OK if code is None else int(code)

    return wrapper


__all__ = ["EXIT_OK", "EXIT_USAGE", "EXIT_FAILURE", "command_safe"]
