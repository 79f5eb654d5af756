"""Finite presentations: data model, builders and abelian invariants."""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .exactmat import (
    E,
    F,
    Generator,
    IntMatrix,
    Named,
    format_matrix,
    generator_matrix,
    parse_matrix,
    theorem_generators,
)
from .words import Word, WordParseError, commutator, cyclic_normal_form, evaluate, parse_word, word


class PresentationError(ValueError):
    pass


class PresentationParseError(PresentationError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


@dataclass(frozen=True)
class Presentation:
    generators: tuple[Generator, ...]
    relators: tuple[Word, ...]
    n: int | None = None
    evaluation: Mapping[Generator, IntMatrix] | None = field(default=None, compare=False)
    families: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        gens = set(self.generators)
        if len(gens) != len(self.generators):
            raise PresentationError("duplicate generators")
        for r in self.relators:
            extra = r.symbols() - gens
            if extra:
                raise PresentationError(f"relator {r} uses unknown symbols {sorted(map(str, extra))}")
        if self.families is not None and len(self.families) != len(self.relators):
            raise PresentationError("one family label per relator")

    def matrix(self, g: Generator) -> IntMatrix:
        if self.evaluation is not None and g in self.evaluation:
            return self.evaluation[g]
        if self.n is None:
            raise PresentationError("presentation has no evaluation")
        return generator_matrix(g, self.n)

    def has_evaluation(self) -> bool:
        if self.n is None:
            return False
        try:
            for g in self.generators:
                self.matrix(g)
        except (PresentationError, ValueError):
            return False
        return True

    def evaluate(self, w: Word) -> IntMatrix:
        if self.n is None:
            raise PresentationError("presentation has no evaluation")
        return evaluate(w, self.n, {g: self.matrix(g) for g in w.symbols()})

    def family_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for f in self.families or ():
            counts[f] = counts.get(f, 0) + 1
        return counts

    def normal_forms(self) -> set[Word]:
        """Relators up to cyclic conjugation and inversion, trivial ones dropped."""
        return {c for c in map(cyclic_normal_form, self.relators) if c}

    def __str__(self) -> str:
        return serialize(self, "plain")


def dedup_relators(relators: Sequence[Word]) -> list[Word]:
    seen: set[Word] = set()
    out = []
    for r in relators:
        key = cyclic_normal_form(r)
        if key not in seen:
            seen.add(key)
            out.append(r)
    return out


# --- builders ------------------------------------------------------------------


def gamma2_presentation(n: int) -> Presentation:
    """Presentation of the level-2 congruence subgroup of GL(n, Z) on E(i,j), F(i)."""
    if n < 1:
        raise PresentationError("n must be >= 1")
    idx = range(1, n + 1)
    rels: list[tuple[str, Word]] = []
    for i in idx:
        rels.append(("1", word((F(i), 2))))
    for i, j in itertools.permutations(idx, 2):
        rels.append(("2", word(E(i, j), F(i)) ** 2))
        rels.append(("2", word(E(i, j), F(j)) ** 2))
    for i, j in itertools.combinations(idx, 2):
        rels.append(("2", word(F(i), F(j)) ** 2))

    fam3a = []
    for i, j, k in itertools.permutations(idx, 3):
        eij = word(E(i, j))
        fam3a += [
            commutator(eij, word(E(i, k))),
            commutator(eij, word(E(k, j))),
            commutator(eij, word(F(k))),
            commutator(eij, word(E(k, i))) * word((E(k, j), 2)),
        ]
    rels += [("3a", r) for r in dedup_relators(fam3a)]

    for i, j, k in itertools.combinations(idx, 3):
        left = word(E(j, i), F(j), E(i, j), F(i), (E(k, i), -1), E(k, j))
        right = word(E(k, i), F(k), E(i, k), F(i), (E(j, i), -1), E(j, k))
        rels.append(("3b", commutator(left, right)))

    fam4 = [
        commutator(word(E(i, j)), word(E(k, l)))
        for i, j, k, l in itertools.permutations(idx, 4)
        if i < k
    ]
    rels += [("4", r) for r in dedup_relators(fam4)]

    gens = tuple(theorem_generators(n))
    return Presentation(
        generators=gens,
        relators=tuple(r for _, r in rels),
        n=n,
        evaluation={g: generator_matrix(g, n) for g in gens},
        families=tuple(f for f, _ in rels),
    )


def expected_family_counts(n: int) -> dict[str, int]:
    """Closed-form relator counts per family of gamma2_presentation(n)."""
    p2 = n * (n - 1)
    p3 = p2 * (n - 2)
    counts = {"1": n, "2": 2 * p2 + p2 // 2, "3a": 3 * p3, "3b": p3 // 6, "4": p3 * (n - 3) // 2}
    return {k: v for k, v in counts.items() if v > 0}


X_MAT = IntMatrix([[1, -1], [0, 1]])
Y_MAT = IntMatrix([[1, 0], [1, 1]])
Z_MAT = IntMatrix([[0, 1], [1, 0]])
GX, GY, GZ = Named("x"), Named("y"), Named("z")


def gl2z_presentation() -> Presentation:
    x, y, z = (Word.gen(g) for g in (GX, GY, GZ))
    rels = (
        x * y * x * ~y * ~x * ~y,
        (x * y) ** 6,
        z ** 2,
        x * z * y * z,
    )
    return Presentation(
        generators=(GX, GY, GZ),
        relators=rels,
        n=2,
        evaluation={GX: X_MAT, GY: Y_MAT, GZ: Z_MAT},
    )


# --- vertex stabilizers ---------------------------------------------------------

_STAB = re.compile(r"(?P<k>[EF])(?P<idx>\d+)_e(?P<t>\d+)")


def stab_symbol(g: Generator, t: int) -> Generator:
    """Name of ``g`` viewed inside the stabilizer of e_t, e.g. ``E12_e3``."""
    if g.kind not in ("E", "F") or any(i > 9 for i in g.idx):
        raise PresentationError(f"cannot tag {g} (single-digit E/F indices only)")
    return Named(f"{g.kind}{''.join(map(str, g.idx))}_e{t}")


def plain_symbol(g: Generator) -> Generator | None:
    """Inverse of :func:`stab_symbol`; None for symbols of other shapes."""
    m = _STAB.fullmatch(g.label) if g.kind == "N" else None
    if not m:
        return None
    digits = tuple(int(c) for c in m.group("idx"))
    return Generator(m.group("k"), digits)


def embed(M: IntMatrix, t: int) -> IntMatrix:
    """Insert e_t as row and column t of an (n-1)x(n-1) matrix."""
    n = M.n + 1
    rows = []
    for r in range(n):
        if r == t - 1:
            rows.append([int(c == t - 1) for c in range(n)])
            continue
        src = M.rows[r if r < t - 1 else r - 1]
        rows.append(list(src[: t - 1]) + [0] + list(src[t - 1:]))
    return IntMatrix(rows)


def shift_index(i: int, t: int) -> int:
    return i if i <= t - 1 else i + 1


def rho(g: Generator, t: int) -> Generator:
    """Index shift carrying a generator of dimension n-1 into the stabilizer of e_t."""
    if g.kind not in ("E", "F"):
        raise PresentationError(f"rho is only defined on E/F symbols, got {g}")
    return Generator(g.kind, tuple(shift_index(i, t) for i in g.idx))


def stabilizer_presentation(n: int, t: int, inner: Presentation) -> Presentation:
    """Presentation of the stabilizer of e_t, built from a presentation of the
    level-2 subgroup in dimension n-1.

    Generators are named ``E{i}{j}_e{t}`` / ``F{i}_e{t}``; their matrices are
    the plain E(i,j), F(i) matrices, all of which fix e_t.
    """
    if not 1 <= t <= n:
        raise PresentationError(f"axis {t} out of range for n={n}")
    if inner.n != n - 1 or not inner.has_evaluation():
        raise PresentationError("inner presentation must be evaluated in dimension n-1")
    others = [i for i in range(1, n + 1) if i != t]

    def s(g: Generator) -> Word:
        return Word.gen(stab_symbol(g, t))

    top = [E(t, i) for i in others]
    lower = [rho(g, t) for g in inner.generators]
    for g, h in zip(inner.generators, lower):
        if embed(inner.matrix(g), t) != generator_matrix(h, n):
            raise PresentationError(f"inner generator {g} does not match its image {h}")

    rels: list[tuple[str, Word]] = []
    for i, j in itertools.combinations(others, 2):
        rels.append(("1", commutator(s(E(t, i)), s(E(t, j)))))
    mapping = {g: s(h) for g, h in zip(inner.generators, lower)}
    for y in inner.relators:
        rels.append(("2", y.substitute(mapping)))
    for i, j in itertools.permutations(others, 2):
        rels.append(("3", commutator(s(E(i, j)), s(E(t, i))) * s(E(t, j)) ** 2))
    for i, j in itertools.permutations(others, 2):
        rels.append(("3", commutator(s(E(i, j)), s(E(t, j)))))
    for i, j, k in itertools.permutations(others, 3):
        rels.append(("3", commutator(s(E(i, j)), s(E(t, k)))))
    for i in others:
        rels.append(("3", (s(E(t, i)) * s(F(i))) ** 2))
    for i, j in itertools.permutations(others, 2):
        rels.append(("3", commutator(s(E(t, j)), s(F(i)))))

    plain = top + lower
    gens = tuple(stab_symbol(g, t) for g in plain)
    return Presentation(
        generators=gens,
        relators=tuple(r for _, r in rels),
        n=n,
        evaluation={stab_symbol(g, t): generator_matrix(g, n) for g in plain},
        families=tuple(f for f, _ in rels),
    )


# --- abelianization ---------------------------------------------------------------


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError("torsion coefficients must form a divisibility chain")
        if any(d < 2 for d in self.torsion):
            raise ValueError("torsion coefficients must be >= 2")

    def __str__(self) -> str:
        parts = [f"Z^{self.free_rank}"] if self.free_rank else []
        parts += [f"Z/{d}" for d in self.torsion]
        return " x ".join(parts) or "0"


def exponent_matrix(P: Presentation) -> list[list[int]]:
    col = {g: k for k, g in enumerate(P.generators)}
    rows = []
    for r in P.relators:
        row = [0] * len(P.generators)
        for g, e in r:
            row[col[g]] += e
        rows.append(row)
    return rows


def smith_diagonal(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form, as a divisor chain."""
    A = [list(r) for r in matrix]
    m = len(A)
    ncols = len(A[0]) if m else 0
    diag = []
    k = 0
    while k < min(m, ncols):
        entries = [(abs(A[i][j]), i, j) for i in range(k, m) for j in range(k, ncols) if A[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        A[k], A[pi] = A[pi], A[k]
        for row in A:
            row[k], row[pj] = row[pj], row[k]
        while True:
            p = A[k][k]
            dirty = False
            for i in range(k + 1, m):
                q = A[i][k] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[k])]
                if A[i][k]:
                    dirty = True
            for j in range(k + 1, ncols):
                q = A[k][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[k]
                if A[k][j]:
                    dirty = True
            if dirty:
                # move the smallest leftover in row/column k onto the pivot
                cand = [(abs(A[i][k]), i, k) for i in range(k + 1, m) if A[i][k]]
                cand += [(abs(A[k][j]), k, j) for j in range(k + 1, ncols) if A[k][j]]
                _, i, j = min(cand)
                if j == k:
                    A[k], A[i] = A[i], A[k]
                else:
                    for row in A:
                        row[k], row[j] = row[j], row[k]
                continue
            bad = next(
                (i for i in range(k + 1, m) for j in range(k + 1, ncols) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            A[k] = [a + b for a, b in zip(A[k], A[bad])]
        diag.append(abs(A[k][k]))
        k += 1
    return diag


def abelianization_invariants(P: Presentation) -> AbelianInvariants:
    diag = smith_diagonal(exponent_matrix(P)) if P.relators and P.generators else []
    return AbelianInvariants(
        free_rank=len(P.generators) - len(diag),
        torsion=tuple(d for d in diag if d > 1),
    )


# --- serialization ------------------------------------------------------------------


def _n_of(P: Presentation) -> int:
    if P.n is not None:
        return P.n
    return max((max(g.idx) for g in P.generators if g.idx), default=0)


def serialize(P: Presentation, fmt: str = "json") -> str:
    if fmt == "json":
        doc = {
            "n": _n_of(P),
            "generators": [str(g) for g in P.generators],
            "relators": [str(r) for r in P.relators],
        }
        named = [g for g in P.generators if g.kind == "N"]
        if named and P.evaluation is not None:
            doc["evaluation"] = {str(g): format_matrix(P.evaluation[g]) for g in named}
        return json.dumps(doc, indent=2)
    if fmt == "plain":
        gens = ", ".join(map(str, P.generators))
        rels = ", ".join(map(str, P.relators))
        return f"gens: {gens}; rels: {rels}"
    if fmt == "gap":
        return _to_gap(P)
    raise PresentationError(f"unknown format {fmt!r}")


def _gap_name(g: Generator) -> str:
    if g.kind == "N":
        return g.label
    return g.kind + "_".join(map(str, g.idx))


def _gap_word(w: Word) -> str:
    if not w:
        return "One(F)"
    return "*".join(_gap_name(g) if e == 1 else f"{_gap_name(g)}^{e}" for g, e in w)


def _to_gap(P: Presentation) -> str:
    names = [_gap_name(g) for g in P.generators]
    lines = [f"F := FreeGroup({', '.join(json.dumps(s) for s in names)});"]
    lines += [f"{s} := F.{k};" for k, s in enumerate(names, 1)]
    body = ",\n  ".join(_gap_word(r) for r in P.relators)
    lines.append(f"rels := [\n  {body}\n];" if P.relators else "rels := [];")
    lines.append("G := F / rels;")
    return "\n".join(lines) + "\n"


def _split_top(text: str, sep: str, offset: int) -> list[tuple[str, int]]:
    """Split at ``sep`` outside parentheses, keeping absolute offsets."""
    parts, depth, start = [], 0, 0
    for k, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append((text[start:k], offset + start))
            start = k + 1
    parts.append((text[start:], offset + start))
    return parts


def _word_at(text: str, offset: int) -> Word:
    try:
        return parse_word(text)
    except WordParseError as exc:
        raise PresentationParseError(f"bad word {text.strip()!r}", offset + exc.pos) from None


def _generator_at(text: str, offset: int) -> Generator:
    w = _word_at(text, offset)
    if len(w.letters) != 1 or w.letters[0][1] != 1:
        raise PresentationParseError(f"expected a single generator, got {text.strip()!r}", offset)
    return w.letters[0][0]


def _build(n: int | None, gens: list[Generator], rels: list[Word], ev=None) -> Presentation:
    evaluation = dict(ev or {})
    if n:
        for g in gens:
            if g.kind != "N" and g.fits(n):
                evaluation.setdefault(g, generator_matrix(g, n))
    try:
        return Presentation(tuple(gens), tuple(rels), n=n or None, evaluation=evaluation or None)
    except PresentationError as exc:
        raise PresentationParseError(str(exc), 0) from None


def parse(text: str, fmt: str = "json") -> Presentation:
    if fmt == "json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PresentationParseError(f"invalid JSON: {exc.msg}", exc.pos) from None
        if not isinstance(doc, dict) or not {"generators", "relators"} <= doc.keys():
            raise PresentationParseError("expected an object with generators and relators", 0)
        gens = [_generator_at(s, 0) for s in doc["generators"]]
        rels = [_word_at(s, 0) for s in doc["relators"]]
        ev = {}
        for name, mtext in (doc.get("evaluation") or {}).items():
            ev[_generator_at(name, 0)] = parse_matrix(mtext)
        return _build(doc.get("n"), gens, rels, ev)
    if fmt == "plain":
        m = re.fullmatch(r"\s*gens:(?P<g>.*?);\s*rels:(?P<r>.*)", text, re.S)
        if not m:
            raise PresentationParseError("expected 'gens: ...; rels: ...'", 0)
        gens = [_generator_at(s, off) for s, off in _split_top(m.group("g"), ",", m.start("g")) if s.strip()]
        rels = [_word_at(s, off) for s, off in _split_top(m.group("r"), ",", m.start("r")) if s.strip()]
        n = max((max(g.idx) for g in gens if g.idx), default=0)
        return _build(n, gens, rels)
    if fmt == "gap":
        raise PresentationError("GAP export is write-only")
    raise PresentationError(f"unknown format {fmt!r}")
