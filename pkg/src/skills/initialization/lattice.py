"""The 16-model initialization lattice, from CCCC down to UUUU."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple

from core.model import ConstraintCode

# display order within each level
LEVEL_ORDER: Tuple[Tuple[str, ...], ...] = (
    ("CCCC",),
    ("CCCU", "CCUC", "CUCC", "UCCC"),
    ("CCUU", "CUCU", "UCCU", "CUUC", "UCUC", "UUCC"),
    ("CUUU", "UCUU", "UUCU", "UUUC"),
    ("UUUU",),
)


@dataclass(frozen=True)
class Lattice:
    levels: Tuple[Tuple[ConstraintCode, ...], ...]
    edges: Tuple[Tuple[ConstraintCode, ConstraintCode], ...]

    def parents(self, code: ConstraintCode) -> List[ConstraintCode]:
        return sorted((p for p, c in self.edges if c == code), key=str)

    def children(self, code: ConstraintCode) -> List[ConstraintCode]:
        return sorted((c for p, c in self.edges if p == code), key=str)

    def ancestors(self, code: ConstraintCode) -> List[ConstraintCode]:
        """All codes the hierarchy must fit before `code`, including itself."""
        seen: Dict[ConstraintCode, None] = {}
        stack = [code]
        while stack:
            current = stack.pop()
            if current in seen:
                continue
            seen[current] = None
            stack.extend(self.parents(current))
        return [c for level in self.levels for c in level if c in seen]


def _relaxations(code: ConstraintCode) -> List[ConstraintCode]:
    letters = str(code)
    return [
        ConstraintCode.parse(letters[:i] + "U" + letters[i + 1:])
        for i, ch in enumerate(letters)
        if ch == "C"
    ]


@lru_cache(maxsize=1)
def build_lattice() -> Lattice:
    """Each edge turns exactly one C into U; level k holds the codes with k−1 U letters."""
    levels = tuple(tuple(ConstraintCode.parse(c) for c in level) for level in LEVEL_ORDER)
    edges = tuple(
        (parent, child)
        for level in levels[:-1]
        for parent in level
        for child in _relaxations(parent)
    )
    return Lattice(levels=levels, edges=edges)


__all__ = ["LEVEL_ORDER", "Lattice", "build_lattice"]
