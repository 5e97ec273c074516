"""Pairing of quantum and semiclassical eigenvalues inside a window."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import PairingError

__all__ = ["ComparisonRow", "ComparisonTable", "pair_spectra"]


@dataclass(frozen=True)
class ComparisonRow:
    index: int
    e_quantum: float
    e_semiclassical: float

    @property
    def abs_diff(self) -> float:
        return abs(self.e_quantum - self.e_semiclassical)


@dataclass(frozen=True)
class ComparisonTable:
    rows: tuple[ComparisonRow, ...] = field(default_factory=tuple)
    mean_spacing: float = math.nan

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def max_abs_diff(self) -> float:
        return max((r.abs_diff for r in self.rows), default=0.0)

    def as_records(self) -> list[dict]:
        return [
            {
                "index": r.index,
                "e_quantum": r.e_quantum,
                "e_semiclassical": r.e_semiclassical,
                "abs_diff": r.abs_diff,
            }
            for r in self.rows
        ]


def _in_window(x: float, window: tuple[float, float]) -> bool:
    return window[0] <= x <= window[1]


def pair_spectra(
    quantum: Sequence[float],
    semiclassical: Sequence[float],
    window: tuple[float, float],
) -> ComparisonTable:
    """Order-preserving pairing of two sorted spectra restricted to a window.

    When the counts differ by one, the surplus element is the one whose
    removal gives the smallest worst-case difference (typically a root that
    sits just across the window edge from its partner).
    """
    q_all = sorted(quantum)
    q_idx = [i for i, x in enumerate(q_all) if _in_window(x, window)]
    q = [q_all[i] for i in q_idx]
    s = sorted(x for x in semiclassical if _in_window(x, window))
    if abs(len(q) - len(s)) > 1:
        raise PairingError(
            f"{len(q)} quantum vs {len(s)} semiclassical values in "
            f"[{window[0]:g}, {window[1]:g}]: a root is missing"
        )
    spacing = (q[-1] - q[0]) / (len(q) - 1) if len(q) >= 2 else math.nan
    pairs: list[tuple[int, float, float]]
    if len(q) == len(s):
        pairs = list(zip(q_idx, q, s))
    else:
        longer_is_q = len(q) > len(s)
        best = None
        n = max(len(q), len(s))
        for drop in range(n):
            if longer_is_q:
                cand = list(zip(q_idx[:drop] + q_idx[drop + 1 :], q[:drop] + q[drop + 1 :], s))
            else:
                cand = list(zip(q_idx, q, s[:drop] + s[drop + 1 :]))
            worst = max((abs(a - b) for _, a, b in cand), default=0.0)
            if best is None or worst < best[0]:
                best = (worst, cand)
        pairs = best[1] if best else []
    rows = tuple(ComparisonRow(i, a, b) for i, a, b in pairs)
    return ComparisonTable(rows, spacing)
