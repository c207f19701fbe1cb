"""Gaussian elimination over the coefficient field."""

from __future__ import annotations

from typing import List, Sequence, Tuple

from .coeffs import ZERO, ParamRational


def rref(rows: Sequence[Sequence[ParamRational]]) -> Tuple[List[List[ParamRational]], List[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: List[int] = []
    row = 0
    for col in range(ncols):
        piv = next((i for i in range(row, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = m[row][col].inverse()
        m[row] = [v * inv for v in m[row]]
        for i in range(len(m)):
            if i != row and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[row])]
        pivots.append(col)
        row += 1
        if row == len(m):
            break
    return [r for r in m[:row]], pivots


def is_zero_row(row: Sequence[ParamRational]) -> bool:
    return all(v == ZERO for v in row)
