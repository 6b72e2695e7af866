"""Right-sided matrix power function (RMPF) over M_{2^t}.

All products run left to right in ascending index.  The group does not
commute, so the evaluation order is part of the contract.
"""

from __future__ import annotations

from collections.abc import Sequence

from .errors import DimensionMismatch, EmptySubset, IndexOutOfRange
from .group import GroupElement, GroupParams, identity, multiply, power

ElementVector = Sequence[GroupElement]
ElementMatrix = Sequence[Sequence[GroupElement]]


def rmpf_vec(p: GroupParams, w: ElementVector, x: Sequence[int]) -> GroupElement:
    """``w^x = w_1^x_1 * w_2^x_2 * ... * w_n^x_n``."""
    if len(w) != len(x):
        raise DimensionMismatch(f"vector lengths differ: {len(w)} != {len(x)}")
    acc = identity(p)
    for wi, xi in zip(w, x):
        acc = multiply(p, acc, power(p, wi, xi))
    return acc


def rmpf(p: GroupParams, W: ElementMatrix, X: Sequence[Sequence[int]]) -> list[list[GroupElement]]:
    """``V = W^X`` with ``v_ij = prod_k w_ik^(x_kj)``; W is m x n, X is n x q."""
    n = len(X)
    if any(len(row) != n for row in W):
        raise DimensionMismatch(f"W has rows of length != {n} (rows of X)")
    q = len(X[0]) if n else 0
    if any(len(row) != q for row in X):
        raise DimensionMismatch("X is ragged")
    cols = [[X[k][j] for k in range(n)] for j in range(q)]
    return [[rmpf_vec(p, row, col) for col in cols] for row in W]


def hadamard(p: GroupParams, u: ElementVector, v: ElementVector) -> list[GroupElement]:
    if len(u) != len(v):
        raise DimensionMismatch(f"vector lengths differ: {len(u)} != {len(v)}")
    return [multiply(p, ui, vi) for ui, vi in zip(u, v)]


def column_fold(p: GroupParams, W: ElementMatrix, S: Sequence[int]) -> list[GroupElement]:
    """Per-column product of the rows of ``W`` selected by ``S`` (0-based).

    ``S`` is processed in ascending order regardless of how it is given.
    """
    if not S:
        raise EmptySubset("column_fold needs at least one row")
    rows = sorted(S)
    if rows[0] < 0 or rows[-1] >= len(W):
        raise IndexOutOfRange(f"row index out of range for {len(W)} rows: {rows}")
    acc = list(W[rows[0]])
    for i in rows[1:]:
        acc = [multiply(p, a, b) for a, b in zip(acc, W[i])]
    return acc
