"""Reidemeister-Schreier rewriting for the level-2 subgroup of GL(2, Z).

The ambient group is presented on x, y, z (see ``gl2z_presentation``); the
transversal is fixed to a0 = 1, a1 = x^-1, a2 = y, a3 = z, a4 = x^-1 z,
a5 = y z.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .exactmat import E, F, Generator, IntMatrix, Named, format_matrix, is_level2, mod2_image
from .presentations import GX, GY, GZ, Presentation, gamma2_presentation, gl2z_presentation
from .words import Letter, Word, cyclic_normal_form, cyclic_reduce, format_word, inverse, parse_word, word

G1, G2, G3, G4 = (Named(f"g{k}") for k in range(1, 5))

B_PRIME = {
    G1: IntMatrix([[1, 2], [0, 1]]),
    G2: IntMatrix([[1, 2], [0, -1]]),
    G3: IntMatrix([[1, 0], [2, 1]]),
    G4: IntMatrix([[-1, 0], [2, 1]]),
}

TRANSVERSAL_WORDS = ("1", "x^-1", "y", "z", "x^-1 z", "y z")

# letters w in the column order of the rewriting table
LETTERS: tuple[Letter, ...] = ((GX, 1), (GX, -1), (GY, 1), (GY, -1), (GZ, 1))

SUBSTITUTION = {
    G1: word(E(1, 2)),
    G2: word(F(2), E(1, 2)),
    G3: word(E(2, 1)),
    G4: word(F(1), E(2, 1)),
}


class SchreierError(RuntimeError):
    pass


@dataclass(frozen=True)
class RewriteCell:
    w: Letter
    i: int
    value: IntMatrix
    symbol: Word

    def as_dict(self) -> dict:
        g, e = self.w
        return {
            "w": format_word([self.w]),
            "i": self.i,
            "matrix": format_matrix(self.value),
            "symbol": format_word(self.symbol).replace(" ", "") if self.symbol else "1",
        }


@dataclass(frozen=True)
class CosetSystem:
    ambient: Presentation
    words: tuple[Word, ...]
    matrices: tuple[IntMatrix, ...]
    action: dict  # (letter, coset) -> coset

    def bar(self, A: IntMatrix) -> int:
        img = mod2_image(A)
        for i, a in enumerate(self.matrices):
            if mod2_image(a) == img:
                return i
        raise SchreierError(f"no coset representative for {format_matrix(A)}")

    def letter_matrix(self, letter: Letter) -> IntMatrix:
        g, e = letter
        return self.ambient.matrix(g) ** e

    def __len__(self) -> int:
        return len(self.words)


def build_coset_system() -> CosetSystem:
    ambient = gl2z_presentation()
    words = tuple(parse_word(s) for s in TRANSVERSAL_WORDS)
    mats = tuple(ambient.evaluate(w) for w in words)
    if len({mod2_image(a) for a in mats}) != len(mats):
        raise SchreierError("transversal has repeated mod-2 images")
    system = CosetSystem(ambient, words, mats, {})
    for letter in LETTERS:
        for i, a in enumerate(mats):
            system.action[(letter, i)] = system.bar(system.letter_matrix(letter) @ a)
    return system


_SYSTEM: CosetSystem | None = None


def coset_system() -> CosetSystem:
    global _SYSTEM
    if _SYSTEM is None:
        _SYSTEM = build_coset_system()
    return _SYSTEM


def bar(A: IntMatrix) -> int:
    """Index of the transversal element with the same mod-2 image as A."""
    return coset_system().bar(A)


def _symbol_of(M: IntMatrix) -> Word:
    if M.is_identity():
        return Word()
    for g, val in B_PRIME.items():
        if M == val:
            return Word.gen(g)
        if M == val.inverse():
            return Word.gen(g, -1)
    raise SchreierError(f"{format_matrix(M)} is not in the generating set")


def cell(letter: Letter, i: int) -> RewriteCell:
    cs = coset_system()
    wa = cs.letter_matrix(letter) @ cs.matrices[i]
    value = cs.matrices[cs.bar(wa)].inverse() @ wa
    if not is_level2(value):
        raise SchreierError(f"cell ({letter}, {i}) left the subgroup")
    return RewriteCell(letter, i, value, _symbol_of(value))


def schreier_table() -> list[list[RewriteCell]]:
    """Rows indexed by coset i = 0..5, columns by w = x, x^-1, y, y^-1, z."""
    return [[cell(letter, i) for letter in LETTERS] for i in range(6)]


def format_table(table: Sequence[Sequence[RewriteCell]] | None = None) -> str:
    table = table or schreier_table()
    head = ["i"] + [format_word([l]) for l in LETTERS]
    rows = [[str(r[0].i)] + [format_matrix(c.value) for c in r] for r in table]
    widths = [max(len(x) for x in col) for col in zip(head, *rows)]
    fmt = lambda r: "  ".join(x.rjust(w) for x, w in zip(r, widths))
    return "\n".join([fmt(head)] + [fmt(r) for r in rows])


def rewrite_relator(r: Word, i: int) -> Word:
    """The word s_ri over g1..g4, free-reduced."""
    cs = coset_system()
    if not cs.ambient.evaluate(r).is_identity():
        raise SchreierError(f"{r} is not a relator of GL(2, Z)")
    flat = r.flat()
    coset = i
    pieces: list[Word] = []
    for letter in reversed(flat):
        pieces.append(cell(letter, coset).symbol)
        coset = cs.action[(letter, coset)]
    if coset != i:
        raise SchreierError("relator does not return to its coset")
    out = Word()
    for p in reversed(pieces):
        out = out * p
    return out


def rewrite_trace(r: Word, i: int) -> list[tuple[Letter, int]]:
    """The cells [w a_j] used by s_ri, left to right."""
    cs = coset_system()
    coset = i
    used = []
    for letter in reversed(r.flat()):
        used.append((letter, coset))
        coset = cs.action[(letter, coset)]
    return used[::-1]


def all_rewrites() -> dict[tuple[int, int], Word]:
    """(relator index, coset) -> s_ri for the four ambient relators."""
    rels = coset_system().ambient.relators
    return {(k, i): rewrite_relator(r, i) for k, r in enumerate(rels) for i in range(6)}


def schreier_presentation() -> Presentation:
    """Generators g1..g4 with the distinct nontrivial s_ri up to conjugation."""
    rewrites = all_rewrites()
    seen: set[Word] = set()
    rels = []
    for key in sorted(rewrites):
        s = rewrites[key]
        nf = cyclic_normal_form(s)
        if nf and nf not in seen:
            seen.add(nf)
            rels.append(s)
    return Presentation((G1, G2, G3, G4), tuple(rels), n=2, evaluation=dict(B_PRIME))


# --- Tietze pass -------------------------------------------------------------


def _involutions(relators: Sequence[Word]) -> set[Generator]:
    return {r.letters[0][0] for r in relators if len(r.letters) == 1 and abs(r.letters[0][1]) == 2}


def _is_involution_relator(r: Word, inv: set[Generator]) -> bool:
    return len(r.letters) == 1 and r.letters[0][0] in inv and abs(r.letters[0][1]) == 2


def reduce_involutions(w: Word, inv: set[Generator]) -> Word:
    """Reduce exponents of involutions to 0 or 1 (valid modulo g^2)."""
    while True:
        nxt = Word((g, e % 2) if g in inv else (g, e) for g, e in w)
        if nxt == w:
            return w
        w = nxt


def _reflection_rules(relators: Sequence[Word], inv: set[Generator]):
    """(X, F, source) for every relator that is a rotation of (X F)^2, F an involution."""
    rules = []
    for idx, r in enumerate(relators):
        c = cyclic_reduce(reduce_involutions(r, inv)).letters
        if len(c) != 4:
            continue
        for k in range(4):
            a, b, c2, d = c[k:] + c[:k]
            if (
                b == d == (b[0], 1)
                and b[0] in inv
                and a == c2
                and abs(a[1]) == 1
                and a[0] not in inv
            ):
                rules.append((a[0], b[0], idx))
                break
    return rules


def _apply_reflection(w: Word, X: Generator, Fg: Generator) -> Word:
    """One rewrite X^a F X^b -> X^(a-s) F X^(b-s) where a, b share the sign s."""
    ls = list(w.letters)
    for k in range(len(ls) - 2):
        (g1, a), (g2, f), (g3, b) = ls[k], ls[k + 1], ls[k + 2]
        if g1 == X and g3 == X and g2 == Fg and f == 1 and a * b > 0:
            s = 1 if a > 0 else -1
            return Word(ls[:k] + [(X, a - s), (Fg, 1), (X, b - s)] + ls[k + 3:])
    return w


def canonical_relator(w: Word, inv: set[Generator]) -> Word:
    """Representative of w up to rotation, inversion and involution exponents.

    Prefers the candidate with fewest negative exponents, then the least
    in letter order.
    """
    c = cyclic_reduce(reduce_involutions(w, inv))
    if not c:
        return c
    cands = []
    for base in (c, cyclic_reduce(reduce_involutions(inverse(c), inv))):
        ls = base.letters
        cands += [ls[k:] + ls[:k] for k in range(len(ls))]
    best = min(cands, key=lambda ls: (sum(e < 0 for _, e in ls), list(ls)))
    return Word(best)


def tietze_simplify(P: Presentation) -> Presentation:
    """Shorten relators using the involution and reflection relators present.

    Every step replaces a relator by a consequence of it and of the other
    relators (and conversely), so the presented group is unchanged.
    """
    rels = list(P.relators)
    inv = _involutions(rels)
    rels = [r if _is_involution_relator(r, inv) else reduce_involutions(r, inv) for r in rels]
    changed = True
    while changed:
        changed = False
        for X, Fg, src in _reflection_rules(rels, inv):
            for idx, r in enumerate(rels):
                if idx == src or _is_involution_relator(r, inv):
                    continue
                new = reduce_involutions(_apply_reflection(r, X, Fg), inv)
                if new != r:
                    rels[idx] = new
                    changed = True
    out, seen = [], set()
    for r in rels:
        key = r if _is_involution_relator(r, inv) else canonical_relator(r, inv)
        if not key:
            continue
        nf = cyclic_normal_form(key)
        if nf not in seen:
            seen.add(nf)
            out.append(key)
    return Presentation(P.generators, tuple(out), n=P.n, evaluation=P.evaluation)


@dataclass
class Derivation:
    rewrites: dict
    schreier: Presentation
    substituted: Presentation
    result: Presentation
    target: Presentation

    @property
    def matches(self) -> bool:
        return set(self.result.generators) == set(self.target.generators) and (
            self.result.normal_forms() == self.target.normal_forms()
        )

    def mismatch_report(self) -> str:
        have, want = self.result.normal_forms(), self.target.normal_forms()
        lines = [f"missing: {w}" for w in want - have] + [f"extra: {w}" for w in have - want]
        return "\n".join(lines) or "match"


def derive(check: bool = True) -> Derivation:
    sch = schreier_presentation()
    gens = (E(1, 2), E(2, 1), F(1), F(2))
    target = gamma2_presentation(2)
    subst_rels = tuple(r.substitute(SUBSTITUTION) for r in sch.relators)
    substituted = Presentation(gens, subst_rels, n=2, evaluation=target.evaluation)
    result = tietze_simplify(substituted)
    d = Derivation(all_rewrites(), sch, substituted, result, target)
    if check and not d.matches:
        raise SchreierError("derived presentation differs from the expected one:\n" + d.mismatch_report())
    return d


def derive_gamma2_2() -> Presentation:
    return derive().result
