"""Aitken-accelerated stopping rule."""
from __future__ import annotations

from typing import Optional

FLAT_STEP = 1e-12
FALLBACK_SCALE = 1e-3


def aitken_asymptote(l_prev: float, l_curr: float, l_next: float) -> Optional[float]:
    """Extrapolated limit l∞, or None when the acceleration a is not in (0, 1)."""
    denom = l_curr - l_prev
    if denom < FLAT_STEP:
        return None
    a = (l_next - l_curr) / denom
    if not 0.0 < a < 1.0 - FLAT_STEP:
        return None
    return l_curr + (l_next - l_curr) / (1.0 - a)


def aitken_stop(l_prev: float, l_curr: float, l_next: float, epsilon: float) -> bool:
    """
    Stop when 0 <= l∞ − l_curr < epsilon.

    A flat step (l_next − l_curr < 1e-12) stops immediately. When the acceleration
    is undefined or outside (0, 1) the absolute rule l_next − l_curr < epsilon·1e-3
    is used instead.
    """
    step = l_next - l_curr
    if step < FLAT_STEP:
        return True
    limit = aitken_asymptote(l_prev, l_curr, l_next)
    if limit is None:
        return step < epsilon * FALLBACK_SCALE
    return 0.0 <= limit - l_curr < epsilon


__all__ = ["aitken_asymptote", "aitken_stop"]
