"""Dense GF(2) linear algebra on numpy uint8 arrays.

Row operations are XOR; matrices hold values in {0, 1}.  Everything here
is exact, with no floating point anywhere.
"""

from __future__ import annotations

import numpy as np


def row_echelon(M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Row-reduce a binary matrix over GF(2).

    Returns (R, pivot_cols) where R is in row-echelon form and
    pivot_cols lists the pivot column indices (length = rank).
    """
    R = (np.asarray(M, dtype=np.uint8) % 2).copy()
    m, n = R.shape
    pivot_cols: list[int] = []
    pr = 0
    for col in range(n):
        if pr >= m:
            break
        rows = np.nonzero(R[pr:, col])[0]
        if rows.size == 0:
            continue
        found = pr + rows[0]
        if found != pr:
            R[[pr, found]] = R[[found, pr]]
        below = np.nonzero(R[pr + 1:, col])[0]
        if below.size:
            R[pr + 1 + below] ^= R[pr]
        pivot_cols.append(col)
        pr += 1
    return R, pivot_cols


def rank(M: np.ndarray) -> int:
    if M.size == 0:
        return 0
    return len(row_echelon(M)[1])


def nullspace(M: np.ndarray) -> np.ndarray:
    """Basis of the right kernel of M, one kernel vector per row."""
    M = np.asarray(M, dtype=np.uint8) % 2
    m, n = M.shape
    R, pivots = row_echelon(M)
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    # Back-substitute each free column against the echelon rows.
    for k, fc in enumerate(free):
        v = basis[k]
        v[fc] = 1
        for r in range(len(pivots) - 1, -1, -1):
            pc = pivots[r]
            if (int(R[r] @ v.astype(np.uint32))) % 2:
                v[pc] ^= 1
    return basis


def solve(A: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution x of A x = b over GF(2), or None if inconsistent."""
    A = np.asarray(A, dtype=np.uint8) % 2
    b = np.asarray(b, dtype=np.uint8) % 2
    m, n = A.shape
    aug = np.concatenate([A, b.reshape(m, 1)], axis=1)
    R, pivots = row_echelon(aug)
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.uint8)
    for r in range(len(pivots) - 1, -1, -1):
        pc = pivots[r]
        rhs = R[r, n]
        acc = int(R[r, :n] @ x.astype(np.uint32)) % 2
        x[pc] = rhs ^ acc
    return x


def in_span(rows: np.ndarray, v: np.ndarray) -> bool:
    """Whether v lies in the row span of `rows`."""
    if rows.size == 0:
        return not np.any(np.asarray(v, dtype=np.uint8) % 2)
    return solve(np.asarray(rows).T, v) is not None
