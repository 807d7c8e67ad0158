"""
Storage result type shared by the persistence adapters.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Dict, Optional

FORMAT_VERSION = 1


@dataclass
class StorageResult:
    """Outcome of a write."""
    success: bool
    location: str
    timestamp: str = field(default_factory=lambda: datetime.now().isoformat())
    message: Optional[str] = None
    error: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)


__all__ = ["FORMAT_VERSION", "StorageResult"]
