"""Constructive membership: write a level-2 matrix as a word in E(i,j), F(i).

Columns are cleared one at a time by left multiplication. While column t is
being reduced, only E(i, j) and F(j) with j outside the already pinned
columns are used, so pinned columns e_1..e_{t-1} are never disturbed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .exactmat import E, F, IntMatrix, det, is_level2
from .presentations import GX, GY, GZ
from .words import Letter, Word


class NotInSubgroup(ValueError):
    pass


@dataclass
class ReductionTrace:
    steps: list[Letter] = field(default_factory=list)
    metrics: list[int] = field(default_factory=list)


def _nearest_quotient(a: int, m: int) -> int:
    """q minimizing |a - q*m|; on ties the remainder is taken nonnegative."""
    q = a // m
    return min((q, q + 1), key=lambda k: (abs(a - k * m), a - k * m < 0))


class _Reducer:
    """Tracks a working vector (or matrix) and the row operations applied."""

    def __init__(self, rows: list[list[int]]):
        self.rows = rows
        self.ops: list[Letter] = []

    def add(self, i: int, j: int, k: int):
        """Left-multiply by E(i,j)^k: row i += 2k * row j (1-based)."""
        if k:
            ri, rj = self.rows[i - 1], self.rows[j - 1]
            self.rows[i - 1] = [a + 2 * k * b for a, b in zip(ri, rj)]
            self.ops.append((E(i, j), k))

    def flip(self, i: int):
        self.rows[i - 1] = [-a for a in self.rows[i - 1]]
        self.ops.append((F(i), 1))

    def entry(self, i: int, c: int) -> int:
        return self.rows[i - 1][c]


def _reduce_column(red: _Reducer, c: int, t: int, pinned: set[int], trace: ReductionTrace):
    """Bring column c (0-based) of the working rows to e_t."""
    n = len(red.rows)
    active = [i for i in range(1, n + 1) if i != t and i not in pinned]
    passive = [i for i in range(1, n + 1) if i != t and i in pinned]

    def metric() -> int:
        return sum(abs(red.entry(i, c)) for i in range(1, n + 1) if i != t)

    trace.metrics.append(metric())
    while True:
        p = red.entry(t, c)
        before = metric()
        for i in active:
            red.add(i, t, -_nearest_quotient(red.entry(i, c), 2 * p))
        if metric() < before:
            trace.metrics.append(metric())
        nonzero = [i for i in active if red.entry(i, c)]
        if not nonzero:
            break
        i = min(nonzero, key=lambda r: (abs(red.entry(r, c)), r))
        red.add(t, i, -_nearest_quotient(p, 2 * red.entry(i, c)))
    p = red.entry(t, c)
    if abs(p) != 1:
        raise NotInSubgroup("column is not primitive")
    before = metric()
    for i in passive:
        q = red.entry(i, c)
        if q % 2:
            raise NotInSubgroup("odd off-diagonal entry")
        red.add(i, t, -q // (2 * p))
    if metric() < before:
        trace.metrics.append(metric())
    if p == -1:
        red.flip(t)


def _check_parity(v: Sequence[int], t: int):
    for i, a in enumerate(v, 1):
        if (a % 2 == 1) != (i == t):
            raise NotInSubgroup(f"entry {i} of {tuple(v)} has the wrong parity for pivot {t}")


def _as_word(ops: list[Letter]) -> Word:
    """Word for the inverse of the applied product of row operations.

    ops are left multiplications in the order applied, so the product is
    ops[-1] ... ops[0] and its inverse reads ops in order with negated
    exponents. F(i) is its own inverse.
    """
    return Word((g, 1 if g.kind == "F" else -e) for g, e in ops)


def reduce_vector(v: Sequence[int], t: int, pinned: Sequence[int] = ()) -> tuple[Word, ReductionTrace]:
    """Find w with evaluate(w) @ v = e_t.

    ``pinned`` rows are never used as sources of row operations, so w fixes
    e_j for every pinned j.
    """
    n = len(v)
    if not 1 <= t <= n:
        raise ValueError(f"pivot {t} out of range")
    _check_parity(v, t)
    red = _Reducer([[a] for a in v])
    trace = ReductionTrace()
    _reduce_column(red, 0, t, set(pinned), trace)
    trace.steps = list(red.ops)
    return Word(reversed(red.ops)), trace


def factor(A: IntMatrix, order: Sequence[int] | None = None) -> Word:
    """A word in E(i,j), F(i) evaluating to A.

    ``order`` is the column processing order (1-based, default 1..n). Columns
    already equal to the corresponding e_t at the start of the order cost
    nothing, and every later letter E(i, j) / F(j) has j outside them.
    """
    if not is_level2(A):
        raise NotInSubgroup("not in Gamma_2(n)")
    n = A.n
    order = list(order or range(1, n + 1))
    if sorted(order) != list(range(1, n + 1)):
        raise ValueError("order must be a permutation of 1..n")
    red = _Reducer([list(r) for r in A.rows])
    pinned: set[int] = set()
    for t in order:
        _reduce_column(red, t - 1, t, pinned, ReductionTrace())
        pinned.add(t)
    if red.rows != [list(r) for r in IntMatrix.identity(n).rows]:
        raise NotInSubgroup("reduction did not reach the identity")
    return _as_word(red.ops)


def factor_with_trace(A: IntMatrix) -> tuple[Word, list[ReductionTrace]]:
    if not is_level2(A):
        raise NotInSubgroup("not in Gamma_2(n)")
    n = A.n
    red = _Reducer([list(r) for r in A.rows])
    traces = []
    for t in range(1, n + 1):
        tr = ReductionTrace()
        start = len(red.ops)
        _reduce_column(red, t - 1, t, set(range(1, t)), tr)
        tr.steps = red.ops[start:]
        traces.append(tr)
    return _as_word(red.ops), traces


# --- GL(2, Z) over x, y, z ----------------------------------------------------------


def factor_gl2(A: IntMatrix) -> Word:
    """A word in x, y, z evaluating to A under the GL(2, Z) presentation."""
    if A.n != 2 or det(A) not in (1, -1):
        raise ValueError("expected a unimodular 2x2 matrix")
    ops: list[Letter] = []  # left multiplications, in order
    (a, b), (c, d) = A.rows
    if det(A) == -1:
        # z A swaps the rows
        ops.append((GZ, 1))
        (a, b), (c, d) = (c, d), (a, b)

    def xpow(k):  # x^k: row1 -= k * row2
        nonlocal a, b
        a, b = a - k * c, b - k * d
        ops.append((GX, k))

    def ypow(k):  # y^k: row2 += k * row1
        nonlocal c, d
        c, d = c + k * a, d + k * b
        ops.append((GY, k))

    while c != 0:
        if a == 0:
            xpow(-c)
        elif abs(c) >= abs(a):
            ypow(-(c // a))
        else:
            xpow(a // c)
    if a == -1:
        ypow(-1)   # (-1, 1)
        xpow(-2)   # (1, 1)
        ypow(-1)   # (1, 0)
    xpow(b)
    if (a, b, c, d) != (1, 0, 0, 1):
        raise AssertionError("GL(2, Z) reduction failed")
    return Word((g, 1 if g == GZ else -e) for g, e in ops if e)
