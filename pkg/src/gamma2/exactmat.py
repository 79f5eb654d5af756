"""Exact integer matrices, the named generator matrices and the level-2 test.

Indices on the public surface are 1-based.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence


class MatrixError(ValueError):
    pass


class IntMatrix:
    """Immutable square matrix of Python integers."""

    __slots__ = ("rows", "n", "_hash")

    def __init__(self, rows: Iterable[Iterable[int]]):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        n = len(rows)
        if n == 0:
            raise MatrixError("matrix must have dimension >= 1")
        if any(len(r) != n for r in rows):
            raise MatrixError("matrix must be square")
        self.rows = rows
        self.n = n
        self._hash = hash(rows)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls((int(i == j) for j in range(n)) for i in range(n))

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> IntMatrix:
        """Matrix unit with a single 1 at 1-based position (i, j)."""
        return cls((int(r == i - 1 and c == j - 1) for c in range(n)) for r in range(n))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self.rows]})"

    def __str__(self) -> str:
        return format_matrix(self)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if other.n != self.n:
            raise MatrixError(f"dimension mismatch {self.n} vs {other.n}")
        cols = list(zip(*other.rows))
        return IntMatrix(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.rows
        )

    __mul__ = __matmul__

    def __add__(self, other: IntMatrix) -> IntMatrix:
        return IntMatrix(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)
        )

    def scale(self, k: int) -> IntMatrix:
        return IntMatrix(tuple(k * a for a in r) for r in self.rows)

    def __pow__(self, k: int) -> IntMatrix:
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = IntMatrix.identity(self.n)
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def transpose(self) -> IntMatrix:
        return IntMatrix(zip(*self.rows))

    def column(self, j: int) -> tuple[int, ...]:
        """1-based column."""
        return tuple(r[j - 1] for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(c) for c in zip(*self.rows)]

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.n:
            raise MatrixError("vector dimension mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.rows)

    def is_identity(self) -> bool:
        return all(
            self.rows[i][j] == (1 if i == j else 0) for i in range(self.n) for j in range(self.n)
        )

    def det(self) -> int:
        return det(self)

    def inverse(self) -> IntMatrix:
        return inverse(self)


def det(A: IntMatrix) -> int:
    """Bareiss fraction-free elimination."""
    n = A.n
    M = [list(r) for r in A.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if M[r][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def inverse(A: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular matrix by integer Gauss-Jordan elimination."""
    d = det(A)
    if d not in (1, -1):
        raise MatrixError(f"matrix is not unimodular (det = {d})")
    n = A.n
    # [A | I], reduced with integer row operations only
    M = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(A.rows)]
    for col in range(n):
        while True:
            nz = [r for r in range(col, n) if M[r][col] != 0]
            piv = min(nz, key=lambda r: abs(M[r][col]))
            M[col], M[piv] = M[piv], M[col]
            done = True
            for r in range(col + 1, n):
                q = M[r][col] // M[col][col]
                if q:
                    M[r] = [a - q * b for a, b in zip(M[r], M[col])]
                if M[r][col] != 0:
                    done = False
            if done:
                break
        if M[col][col] < 0:
            M[col] = [-a for a in M[col]]
    for col in reversed(range(n)):
        for r in range(col):
            q = M[r][col]
            if q:
                M[r] = [a - q * b for a, b in zip(M[r], M[col])]
    return IntMatrix(row[n:] for row in M)


def matprod(mats: Iterable[IntMatrix], n: int) -> IntMatrix:
    return reduce(lambda a, b: a @ b, mats, IntMatrix.identity(n))


# --- generators -----------------------------------------------------------

_KINDS = ("E", "F", "T", "S", "N")


@dataclass(frozen=True, order=True)
class Generator:
    """A generator symbol: E(i,j), F(i), T(i,j), S(i) or a free-standing name."""

    kind: str
    idx: tuple[int, ...] = ()
    label: str = ""

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        arity = {"E": 2, "T": 2, "F": 1, "S": 1, "N": 0}[self.kind]
        if len(self.idx) != arity:
            raise ValueError(f"{self.kind} takes {arity} indices")
        if arity == 2 and self.idx[0] == self.idx[1]:
            raise ValueError(f"{self.kind}({self.idx[0]},{self.idx[1]}) needs distinct indices")
        if any(i < 1 for i in self.idx):
            raise ValueError("indices are 1-based")
        if self.kind == "N" and not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", self.label):
            raise ValueError(f"invalid generator name {self.label!r}")

    def __str__(self) -> str:
        if self.kind == "N":
            return self.label
        return f"{self.kind}({','.join(map(str, self.idx))})"

    def __repr__(self) -> str:
        return str(self)

    def fits(self, n: int) -> bool:
        if self.kind == "S":
            return self.idx[0] <= n - 1
        return self.kind != "N" and all(i <= n for i in self.idx)


def E(i: int, j: int) -> Generator:
    return Generator("E", (i, j))


def F(i: int) -> Generator:
    return Generator("F", (i,))


def T(i: int, j: int) -> Generator:
    return Generator("T", (i, j))


def S(i: int) -> Generator:
    return Generator("S", (i,))


def Named(label: str) -> Generator:
    return Generator("N", (), label)


def generator_matrix(g: Generator, n: int) -> IntMatrix:
    if g.kind == "N":
        raise MatrixError(f"{g} has no intrinsic matrix")
    if not g.fits(n):
        raise MatrixError(f"{g} is out of range for n={n}")
    I = IntMatrix.identity(n)
    if g.kind == "E":
        return I + IntMatrix.unit(n, *g.idx).scale(2)
    if g.kind == "T":
        return I + IntMatrix.unit(n, *g.idx)
    if g.kind == "F":
        (i,) = g.idx
        return I + IntMatrix.unit(n, i, i).scale(-2)
    (i,) = g.idx
    rows = [list(r) for r in I.rows]
    rows[i - 1], rows[i] = rows[i], rows[i - 1]
    return IntMatrix(rows)


def theorem_generators(n: int) -> list[Generator]:
    """E(i,j) for i != j in lexicographic order, then F(1..n)."""
    es = [E(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    return es + [F(i) for i in range(1, n + 1)]


# --- level 2 ----------------------------------------------------------------


def is_level2(A: IntMatrix) -> bool:
    n = A.n
    for i in range(n):
        for j in range(n):
            if (A.rows[i][j] % 2 == 1) != (i == j):
                return False
    return det(A) in (1, -1)


Mod2Matrix = tuple  # tuple of row tuples with entries in {0, 1}


def mod2_image(A: IntMatrix) -> Mod2Matrix:
    return tuple(tuple(x % 2 for x in r) for r in A.rows)


def mod2_mul(A: Mod2Matrix, B: Mod2Matrix) -> Mod2Matrix:
    cols = list(zip(*B))
    return tuple(tuple(sum(a & b for a, b in zip(r, c)) % 2 for c in cols) for r in A)


def rank_mod2(rows: Sequence[Sequence[int]]) -> int:
    vecs = [int("".join(str(x % 2) for x in r), 2) for r in rows]
    rank = 0
    while vecs:
        pivot = max(vecs)
        vecs.remove(pivot)
        if pivot == 0:
            continue
        rank += 1
        top = pivot.bit_length() - 1
        vecs = [v ^ pivot if (v >> top) & 1 else v for v in vecs]
    return rank


MAX_ENUM_DIM = 4


def enumerate_gl_mod2(n: int) -> set[Mod2Matrix]:
    if not 1 <= n <= MAX_ENUM_DIM:
        raise MatrixError(f"enumeration only supported for 1 <= n <= {MAX_ENUM_DIM}")
    out = set()
    for bits in itertools.product((0, 1), repeat=n * n):
        rows = tuple(bits[k * n:(k + 1) * n] for k in range(n))
        if rank_mod2(rows) == n:
            out.add(rows)
    return out


# --- text format --------------------------------------------------------------


def format_matrix(A: IntMatrix) -> str:
    return ";".join(",".join(str(x) for x in r) for r in A.rows)


def parse_matrix(text: str) -> IntMatrix:
    """Parse ``"1,2;0,-1"``. Whitespace is ignored."""
    compact = re.sub(r"\s+", "", text)
    if not compact:
        raise MatrixError("empty matrix text")
    rows = []
    pos = 0
    for r, chunk in enumerate(compact.split(";")):
        row = []
        for entry in chunk.split(","):
            if not re.fullmatch(r"[+-]?\d+", entry):
                raise MatrixError(f"bad matrix entry {entry!r} at position {pos} (row {r + 1})")
            row.append(int(entry))
            pos += len(entry) + 1
        rows.append(row)
    try:
        return IntMatrix(rows)
    except MatrixError as exc:
        raise MatrixError(f"{exc}: {text!r}") from None
