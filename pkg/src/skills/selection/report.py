"""
Group-factor report: every searched model in ascending BIC order, flagged when
within 1% of the best BIC. Columns are plot-ready (x = rank, y = BIC).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import pandas as pd

from core.errors import InvalidInputError
from skills.selection.search import SearchResult


@dataclass(frozen=True)
class ReportRow:
    rank: int
    code: str
    G: int
    q: int
    bic: Optional[float]
    above_line: bool
    status: str

    @property
    def label(self) -> str:
        return f"{self.code} (G={self.G}, q={self.q})"


@dataclass(frozen=True)
class GroupFactorReport:
    rows: Tuple[ReportRow, ...]
    best_bic: float
    one_percent_line: float

    def __len__(self) -> int:
        return len(self.rows)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {"rank": r.rank, "code": r.code, "G": r.G, "q": r.q, "bic": r.bic,
                 "above_one_percent_line": r.above_line, "status": r.status, "label": r.label}
                for r in self.rows
            ]
        )

    def to_text(self) -> str:
        lines: List[str] = [
            f"# best BIC {self.best_bic:.3f}; 1% line at {self.one_percent_line:.3f}",
            f"{'rank':>4}  {'code':<4}  {'G':>2}  {'q':>2}  {'BIC':>14}  above_1%  status",
        ]
        for r in self.rows:
            bic_text = f"{r.bic:14.3f}" if r.bic is not None else f"{'-':>14}"
            flag = "*" if r.above_line else ""
            lines.append(f"{r.rank:>4}  {r.code:<4}  {r.G:>2}  {r.q:>2}  {bic_text}  {flag:<8}  {r.status}")
        return "\n".join(lines) + "\n"


def group_factor_report(result: SearchResult) -> GroupFactorReport:
    if not result.entries:
        raise InvalidInputError("empty search result")
    ordered = sorted(
        result.entries,
        key=lambda e: (0 if e.failed else 1, e.bic if not e.failed else -math.inf, str(e.code), e.G, e.q),
    )
    rows = tuple(
        ReportRow(
            rank=rank,
            code=str(e.code),
            G=e.G,
            q=e.q,
            bic=None if e.failed else e.bic,
            above_line=result.above_line(e),
            status="failed" if e.failed else ("converged" if e.converged else "max-iterations"),
        )
        for rank, e in enumerate(ordered, start=1)
    )
    return GroupFactorReport(rows=rows, best_bic=result.best_entry.bic, one_percent_line=result.one_percent_line)


__all__ = ["ReportRow", "GroupFactorReport", "group_factor_report"]
