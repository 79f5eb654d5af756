"""Free-group words with run-length exponents."""

from __future__ import annotations

import re
from typing import Callable, Iterable, Mapping, Sequence

from .exactmat import Generator, IntMatrix, generator_matrix

Letter = tuple[Generator, int]


class WordParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


def _reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for g, e in letters:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            e += out.pop()[1]
            if e == 0:
                continue
        out.append((g, e))
    return tuple(out)


class Word:
    """A freely reduced word. Adjacent letters always carry distinct symbols."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Letter] = ()):
        self.letters = _reduce(letters)

    @classmethod
    def gen(cls, g: Generator, e: int = 1) -> Word:
        return cls([(g, e)])

    @classmethod
    def parse(cls, text: str) -> Word:
        return parse_word(text)

    def __len__(self) -> int:
        """Length as a flat word (sum of absolute exponents)."""
        return sum(abs(e) for _, e in self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __mul__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> Word:
        return power(self, k)

    def __invert__(self) -> Word:
        return inverse(self)

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"

    def symbols(self) -> set[Generator]:
        return {g for g, _ in self.letters}

    def flat(self) -> list[Letter]:
        """Expanded form with exponents +-1."""
        return [(g, 1 if e > 0 else -1) for g, e in self.letters for _ in range(abs(e))]

    def substitute(self, mapping: Mapping[Generator, Word]) -> Word:
        """Replace symbols by words; symbols missing from ``mapping`` are kept."""
        out: list[Letter] = []
        for g, e in self.letters:
            if g in mapping:
                out.extend(power(mapping[g], e).letters)
            else:
                out.append((g, e))
        return Word(out)

    def rename(self, fn: Callable[[Generator], Generator]) -> Word:
        return Word((fn(g), e) for g, e in self.letters)


def word(*parts) -> Word:
    """Build a word from generators, (generator, exponent) pairs and words."""
    letters: list[Letter] = []
    for p in parts:
        if isinstance(p, Word):
            letters.extend(p.letters)
        elif isinstance(p, Generator):
            letters.append((p, 1))
        else:
            g, e = p
            letters.append((g, e))
    return Word(letters)


def free_reduce(w: Word | Iterable[Letter]) -> Word:
    if isinstance(w, Word):
        return w
    return Word(w)


def inverse(w: Word) -> Word:
    return Word((g, -e) for g, e in reversed(w.letters))


def power(w: Word, k: int) -> Word:
    if k < 0:
        return power(inverse(w), -k)
    return Word(w.letters * k)


def conjugate(u: Word, v: Word) -> Word:
    """v^-1 u v."""
    return inverse(v) * u * v


def commutator(u: Word, v: Word) -> Word:
    """[u, v] = u^-1 v^-1 u v."""
    return inverse(u) * inverse(v) * u * v


def cyclic_reduce(w: Word) -> Word:
    letters = list(w.letters)
    while len(letters) >= 2 and letters[0][0] == letters[-1][0]:
        g, e = letters[0]
        e += letters.pop()[1]
        if e == 0:
            letters.pop(0)
        else:
            letters[0] = (g, e)
    return Word(letters)


def _letter_key(letter: Letter):
    g, e = letter
    return (g, e)


def cyclic_normal_form(w: Word) -> Word:
    """Canonical representative of the conjugacy class of w and of w^-1.

    Cyclically reduce, then take the lexicographically least rotation among
    the rotations of the word and of its inverse.
    """
    c = cyclic_reduce(w)
    if not c.letters:
        return c
    candidates = []
    for base in (c, inverse(c)):
        ls = base.letters
        for k in range(len(ls)):
            candidates.append(ls[k:] + ls[:k])
    best = min(candidates, key=lambda ls: [_letter_key(x) for x in ls])
    return Word(best)


def evaluate(
    w: Word | Iterable[Letter],
    n: int,
    values: Mapping[Generator, IntMatrix] | None = None,
) -> IntMatrix:
    """Left-to-right product of the generator matrices.

    ``values`` overrides or supplies matrices (required for named generators).
    """
    result = IntMatrix.identity(n)
    cache: dict[Generator, IntMatrix] = {}
    for g, e in (w.letters if isinstance(w, Word) else w):
        m = cache.get(g)
        if m is None:
            if values is not None and g in values:
                m = values[g]
            else:
                m = generator_matrix(g, n)
            if m.n != n:
                raise ValueError(f"matrix for {g} has dimension {m.n}, expected {n}")
            cache[g] = m
        result = result @ (m ** e)
    return result


# --- text grammar -------------------------------------------------------------

_TOKEN = re.compile(
    r"(?:(?P<k2>[ET])\(\s*(?P<i>\d+)\s*,\s*(?P<j>\d+)\s*\)"
    r"|(?P<k1>[FS])\(\s*(?P<a>\d+)\s*\)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*))"
    r"(?:\^(?P<exp>[+-]?\d+))?"
)
_SEP = re.compile(r"[\s*]*")


def parse_word(text: str) -> Word:
    """Parse the word grammar, e.g. ``"E(2,1) F(2) E(3,1)^-1"``.

    ``1`` or an empty string denotes the empty word.
    """
    if text.strip() in ("", "1"):
        return Word()
    letters: list[Letter] = []
    pos = _SEP.match(text, 0).end()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise WordParseError("unexpected character", text, pos)
        try:
            if m.group("k2"):
                g = Generator(m.group("k2"), (int(m.group("i")), int(m.group("j"))))
            elif m.group("k1"):
                g = Generator(m.group("k1"), (int(m.group("a")),))
            else:
                g = Generator("N", (), m.group("name"))
        except ValueError as exc:
            raise WordParseError(str(exc), text, pos) from None
        e = int(m.group("exp")) if m.group("exp") is not None else 1
        letters.append((g, e))
        end = m.end()
        sep_end = _SEP.match(text, end).end()
        if sep_end == end and sep_end < len(text):
            raise WordParseError("expected separator", text, end)
        pos = sep_end
    return Word(letters)


def format_word(w: Word | Sequence[Letter]) -> str:
    letters = w.letters if isinstance(w, Word) else w
    if not letters:
        return "1"
    return " ".join(str(g) if e == 1 else f"{g}^{e}" for g, e in letters)
