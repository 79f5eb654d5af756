"""Simplicial complexes, vertex and edge stabilizers, and presentation assembly.

For n = 3 the level-2 subgroup acts on the complex of partial bases of Z^3
with quotient B_3(Z_2) (seven vertices). For n >= 4 the quotient is the full
simplex on e_1..e_n. In both cases every edge element g_e is trivial, so the
assembled presentation is the free product of the vertex stabilizers modulo
edge relators X_v X_w^-1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .exactmat import (
    E,
    F,
    Generator,
    IntMatrix,
    Named,
    S,
    T,
    generator_matrix,
    is_level2,
    matprod,
    rank_mod2,
    theorem_generators,
)
from .membership import factor
from .presentations import (
    Presentation,
    PresentationError,
    dedup_relators,
    gamma2_presentation,
    plain_symbol,
    stab_symbol,
    stabilizer_presentation,
)
from .words import Word, inverse, parse_word


class AssemblyError(RuntimeError):
    pass


Vector = tuple[int, ...]


def unit_vector(n: int, i: int) -> Vector:
    return tuple(int(k == i - 1) for k in range(n))


@dataclass(frozen=True)
class SimplicialComplex:
    vertices: tuple[Vector, ...]
    simplices: dict  # dimension -> sorted list of vertex-index tuples (0-based)

    def count(self, dim: int) -> int:
        return len(self.simplices.get(dim, ()))

    def f_vector(self) -> list[int]:
        return [self.count(d) for d in sorted(self.simplices)]

    def is_downward_closed(self) -> bool:
        for d, simps in self.simplices.items():
            lower = set(self.simplices.get(d - 1, ()))
            for s in simps:
                if d > 0 and any(f not in lower for f in itertools.combinations(s, d)):
                    return False
        return True


MAX_MOD2_DIM = 4


def build_B_mod2(n: int) -> SimplicialComplex:
    """Partial bases of Z_2^n: k distinct nonzero vectors spanning a rank-k space."""
    if not 1 <= n <= MAX_MOD2_DIM:
        raise ValueError(f"build_B_mod2 supports 1 <= n <= {MAX_MOD2_DIM}")
    vecs = [v for v in itertools.product((0, 1), repeat=n) if any(v)]
    # e_1, ..., e_n first, then by weight; within a weight, descending as bit tuples
    vecs.sort(key=lambda v: (sum(v), tuple(-x for x in v)))
    simplices = {}
    for k in range(1, n + 1):
        simplices[k - 1] = [
            s for s in itertools.combinations(range(len(vecs)), k)
            if rank_mod2([vecs[i] for i in s]) == k
        ]
    return SimplicialComplex(tuple(vecs), simplices)


def excluded_triples(cx: SimplicialComplex) -> list[tuple[int, ...]]:
    """Vertex triples (1-based) that are not 2-simplices."""
    present = set(cx.simplices.get(2, ()))
    return [
        tuple(i + 1 for i in t)
        for t in itertools.combinations(range(len(cx.vertices)), 3)
        if t not in present
    ]


def orbit_complex(n: int) -> SimplicialComplex:
    """The full simplex on e_1..e_n."""
    if n < 2:
        raise ValueError("n must be >= 2")
    verts = tuple(unit_vector(n, i) for i in range(1, n + 1))
    simplices = {k - 1: list(itertools.combinations(range(n), k)) for k in range(1, n + 1)}
    return SimplicialComplex(verts, simplices)


def is_extension(A: IntMatrix, simplex: Sequence[Sequence[int]]) -> bool:
    cols = set(A.columns())
    return is_level2(A) and all(tuple(v) in cols for v in simplex)


# --- stabilizer systems ---------------------------------------------------------


@dataclass
class StabilizerSystem:
    fixed: tuple[Vector, ...]
    generators: list[tuple[str, IntMatrix, Word | None]]
    presentation: Presentation | None = None
    names: dict = field(default_factory=dict)  # label -> Generator used in presentations

    def matrices(self) -> list[IntMatrix]:
        return [m for _, m, _ in self.generators]

    def violations(self) -> list[str]:
        bad = []
        for label, m, _ in self.generators:
            if not is_level2(m):
                bad.append(f"{label} is not level 2")
            for v in self.fixed:
                if m.apply(v) != tuple(v):
                    bad.append(f"{label} moves {v}")
        return bad


def conjugation_transport(
    X: IntMatrix,
    sys: StabilizerSystem,
    relabel: Callable[[str], str] | None = None,
) -> StabilizerSystem:
    """Image of a stabilizer system under A -> X A X^-1."""
    Xi = X.inverse()
    relabel = relabel or (lambda s: s)
    gens = [(relabel(l), X @ m @ Xi, None) for l, m, _ in sys.generators]
    pres = None
    names = {}
    if sys.presentation is not None:
        ren = {sys.names.get(l, Named(l)): Named(relabel(l)) for l, _, _ in sys.generators}
        names = {relabel(l): ren[sys.names.get(l, Named(l))] for l, _, _ in sys.generators}
        P = sys.presentation
        pres = Presentation(
            generators=tuple(ren.get(g, g) for g in P.generators),
            relators=tuple(r.rename(lambda g: ren.get(g, g)) for r in P.relators),
            n=P.n,
            evaluation={ren.get(g, g): X @ P.matrix(g) @ Xi for g in P.generators},
            families=P.families,
        )
    return StabilizerSystem(tuple(X.apply(v) for v in sys.fixed), gens, pres, names)


# --- n = 3 data --------------------------------------------------------------------


def _m(text: str) -> IntMatrix:
    return IntMatrix([[int(x) for x in row.split()] for row in text.split(";")])


def _prod(*names: Generator, n: int = 3) -> IntMatrix:
    return matprod((generator_matrix(g, n) for g in names), n)


VERTEX_VECTORS = {
    1: (1, 0, 0), 2: (0, 1, 0), 3: (0, 0, 1),
    4: (1, 1, 0), 5: (1, 0, 1), 6: (0, 1, 1), 7: (1, 1, 1),
}

# X_i with X_i e_1 = v_i; the stabilizer of v_i is X_i (stabilizer of e_1) X_i^-1
VERTEX_CONJUGATORS = {
    1: (),
    2: (S(1),),
    3: (S(2), S(1)),
    4: (T(2, 1),),
    5: (S(2), T(2, 1)),
    6: (S(1), S(2), T(2, 1)),
    7: (T(3, 1), T(2, 1)),
}

LETTERS = "abcdef"
# the stabilizer of e_1 in dimension 3, in generator order
V1_GENERATORS = (E(1, 2), E(1, 3), E(2, 3), E(3, 2), F(2), F(3))


def vertex_letter(letter: str, i: int) -> Generator:
    return Named(f"{letter}_v{i}")


def vertex_conjugator(i: int) -> IntMatrix:
    return _prod(*VERTEX_CONJUGATORS[i])


@dataclass(frozen=True)
class EdgeFamily:
    edges: tuple[tuple[int, int], ...]
    conjugator: tuple[Generator, ...]
    matrices: tuple[IntMatrix, IntMatrix, IntMatrix]


# Edge stabilizers as displayed, each family being the image of the (v1, v2)
# family under the listed conjugator.
EDGE_FAMILIES = (
    EdgeFamily(((1, 2), (1, 4), (2, 4)), (),
               (_m("1 0 2;0 1 0;0 0 1"), _m("1 0 0;0 1 2;0 0 1"), _m("1 0 0;0 1 0;0 0 -1"))),
    EdgeFamily(((1, 3), (1, 5), (3, 5)), (S(2),),
               (_m("1 2 0;0 1 0;0 0 1"), _m("1 0 0;0 1 0;0 2 1"), _m("1 0 0;0 -1 0;0 0 1"))),
    EdgeFamily(((2, 3), (2, 6), (3, 6)), (S(1), S(2)),
               (_m("1 0 0;2 1 0;0 0 1"), _m("1 0 0;0 1 0;2 0 1"), _m("-1 0 0;0 1 0;0 0 1"))),
    EdgeFamily(((1, 6), (1, 7), (6, 7)), (T(3, 2),),
               (_m("1 -2 2;0 1 0;0 0 1"), _m("1 0 0;0 -1 2;0 -2 3"), _m("1 0 0;0 1 0;0 2 -1"))),
    EdgeFamily(((2, 5), (2, 7), (5, 7)), (S(1), T(3, 2)),
               (_m("1 0 0;-2 1 2;0 0 1"), _m("-1 0 2;0 1 0;-2 0 3"), _m("1 0 0;0 1 0;2 0 -1"))),
    EdgeFamily(((3, 4), (3, 7), (4, 7)), (S(2), S(1), T(3, 2)),
               (_m("1 0 0;0 1 0;-2 2 1"), _m("-1 2 0;-2 3 0;0 0 1"), _m("1 0 0;2 -1 0;0 0 1"))),
    EdgeFamily(((5, 6),), (T(3, 1), T(3, 2)),
               (_m("-1 -2 2;0 1 0;-2 -2 3"), _m("1 0 0;-2 -1 2;-2 -2 3"), _m("1 0 0;0 1 0;2 2 -1"))),
    EdgeFamily(((4, 6),), (S(2), T(3, 1), T(3, 2)),
               (_m("-1 2 -2;-2 3 -2;0 0 1"), _m("1 0 0;-2 3 -2;-2 2 -1"), _m("1 0 0;2 -1 2;0 0 1"))),
    EdgeFamily(((4, 5),), (S(1), S(2), T(3, 1), T(3, 2)),
               (_m("3 -2 -2;2 -1 -2;0 0 1"), _m("3 -2 -2;0 1 0;2 -2 -1"), _m("-1 2 2;0 1 0;0 0 1"))),
)


def vertex_stabilizer(i: int, n: int = 3) -> StabilizerSystem:
    """Stabilizer of v_i in dimension 3, transported from the stabilizer of e_1."""
    if n != 3 or i not in VERTEX_VECTORS:
        raise ValueError("vertex stabilizers are tabulated for n = 3, i = 1..7")
    base = stabilizer_presentation(3, 1, gamma2_presentation(2))
    ren = {g: vertex_letter(l, 1) for g, l in zip(base.generators, LETTERS)}
    base = Presentation(
        generators=tuple(ren[g] for g in base.generators),
        relators=tuple(r.rename(ren.__getitem__) for r in base.relators),
        n=3,
        evaluation={ren[g]: base.matrix(g) for g in base.generators},
        families=base.families,
    )
    v1 = StabilizerSystem(
        fixed=((1, 0, 0),),
        generators=[
            (f"{l}_v1", generator_matrix(g, 3), Word.gen(g)) for l, g in zip(LETTERS, V1_GENERATORS)
        ],
        presentation=base,
        names={f"{l}_v1": vertex_letter(l, 1) for l in LETTERS},
    )
    if i == 1:
        return v1
    out = conjugation_transport(vertex_conjugator(i), v1, lambda s: s.replace("_v1", f"_v{i}"))
    out.generators = [(l, m, factor(m)) for l, m, _ in out.generators]
    return out


def edge_stabilizer_data(n: int = 3) -> dict[tuple[int, int], StabilizerSystem]:
    if n != 3:
        raise ValueError("edge data is tabulated for n = 3")
    out = {}
    for fam in EDGE_FAMILIES:
        for i, j in fam.edges:
            out[(i, j)] = StabilizerSystem(
                fixed=(VERTEX_VECTORS[i], VERTEX_VECTORS[j]),
                generators=[(f"M{k}", m, factor(m)) for k, m in enumerate(fam.matrices, 1)],
            )
    return out


def family_images(fam: EdgeFamily) -> set[IntMatrix]:
    """The (v1, v2) triple conjugated by the family's conjugator."""
    X = _prod(*fam.conjugator)
    Xi = X.inverse()
    return {X @ m @ Xi for m in EDGE_FAMILIES[0].matrices}


# --- words in vertex generators ------------------------------------------------------


_V1_INDEX = {g: l for g, l in zip(V1_GENERATORS, LETTERS)}


def word_at_vertex(M: IntMatrix, i: int) -> Word:
    """M, which must fix v_i, as a word in the generators a_vi .. f_vi (n = 3)."""
    X = vertex_conjugator(i)
    local = X.inverse() @ M @ X
    if local.column(1) != (1, 0, 0):
        raise AssemblyError(f"matrix does not fix v{i}")
    w = factor(local)
    return w.rename(lambda g: vertex_letter(_V1_INDEX[g], i))


def word_at_axis(M: IntMatrix, t: int) -> Word:
    """M, which must fix e_t, as a word in the generators of the stabilizer of e_t."""
    n = M.n
    if M.column(t) != unit_vector(n, t):
        raise AssemblyError(f"matrix does not fix e{t}")
    w = factor(M, [t] + [k for k in range(1, n + 1) if k != t])
    return w.rename(lambda g: stab_symbol(g, t))


# --- assembly ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AssemblyPlan:
    """Orbit data: a spanning tree of the quotient, its edges and triangles.

    Every edge element g_e is trivial for these actions, so the tree only
    records which vertex representatives are joined; no loop words are needed.
    """
    tree: tuple[tuple[int, int], ...]
    edges: tuple[tuple[int, int], ...]
    triangles: tuple[tuple[int, int, int], ...]

    @classmethod
    def from_complex(cls, cx: SimplicialComplex) -> "AssemblyPlan":
        edges = tuple((a + 1, b + 1) for a, b in cx.simplices.get(1, ()))
        tris = tuple(tuple(v + 1 for v in t) for t in cx.simplices.get(2, ()))
        tree = tuple(e for e in edges if e[0] == 1)
        return cls(tree, edges, tris)

    def spans(self, vertex_count: int) -> bool:
        reached = {1} | {b for _, b in self.tree}
        return reached == set(range(1, vertex_count + 1))


@dataclass
class Assembly:
    n: int
    vertex_presentations: dict
    edge_relators: dict  # edge -> list of relators
    presentation: Presentation
    plan: AssemblyPlan | None = None

    @property
    def vertex_count(self) -> int:
        return len(self.vertex_presentations)

    @property
    def edge_count(self) -> int:
        return len(self.edge_relators)


def _merge(n: int, parts: Sequence[Presentation], extra: Sequence[Word]) -> Presentation:
    gens, rels, ev, fams = [], [], {}, []
    for P in parts:
        gens += P.generators
        rels += P.relators
        fams += ["vertex"] * len(P.relators)
        ev.update({g: P.matrix(g) for g in P.generators})
    rels += extra
    fams += ["edge"] * len(extra)
    return Presentation(tuple(gens), tuple(rels), n=n, evaluation=ev, families=tuple(fams))


def _edge_relator(P: Presentation, M: IntMatrix, wv: Word, ww: Word, label: str) -> Word:
    if P.evaluate(wv) != M or P.evaluate(ww) != M:
        raise AssemblyError(f"edge relator {label}: sides do not evaluate to the edge element")
    return wv * inverse(ww)


def assemble(n: int, inner: Presentation | None = None) -> Assembly:
    if n == 3:
        return _assemble3()
    if n < 3:
        raise ValueError("assembly needs n >= 3")
    if inner is None:
        inner = gamma2_presentation(3) if n == 4 else identify(assemble(n - 1).presentation)
    verts = {t: stabilizer_presentation(n, t, inner) for t in range(1, n + 1)}
    ev = {}
    for P in verts.values():
        ev.update({g: P.matrix(g) for g in P.generators})
    probe = Presentation(tuple(ev), (), n=n, evaluation=ev)
    edges = {}
    for s, t in itertools.combinations(range(1, n + 1), 2):
        gens = [g for g in theorem_generators(n) if g.idx[-1] not in (s, t)]
        rels = []
        for g in gens:
            M = generator_matrix(g, n)
            rels.append(_edge_relator(probe, M, word_at_axis(M, s), word_at_axis(M, t), f"{g}@({s},{t})"))
        edges[(s, t)] = rels
    pres = _merge(n, list(verts.values()), [r for rs in edges.values() for r in rs])
    return Assembly(n, verts, edges, pres, AssemblyPlan.from_complex(orbit_complex(n)))


def _assemble3() -> Assembly:
    systems = {i: vertex_stabilizer(i) for i in VERTEX_VECTORS}
    verts = {i: s.presentation for i, s in systems.items()}
    ev = {}
    for P in verts.values():
        ev.update({g: P.matrix(g) for g in P.generators})
    probe = Presentation(tuple(ev), (), n=3, evaluation=ev)
    edges = {}
    for (i, j), sys in sorted(edge_stabilizer_data().items()):
        edges[(i, j)] = [
            _edge_relator(probe, M, word_at_vertex(M, i), word_at_vertex(M, j), f"{l}@({i},{j})")
            for l, M, _ in sys.generators
        ]
    pres = _merge(3, list(verts.values()), [r for rs in edges.values() for r in rs])
    return Assembly(3, verts, edges, pres, AssemblyPlan.from_complex(build_B_mod2(3)))


def brown_assemble(n: int) -> Presentation:
    return assemble(n).presentation


def identify(P: Presentation) -> Presentation:
    """Replace every generator whose matrix is a standard generator E(i,j)/F(i)
    by that symbol, then drop trivial and duplicate relators."""
    n = P.n
    plain = {generator_matrix(g, n): g for g in theorem_generators(n)}
    mapping = {}
    for g in P.generators:
        target = plain.get(P.matrix(g))
        if target is not None:
            hint = plain_symbol(g)
            if hint is not None and hint != target:
                raise AssemblyError(f"{g} evaluates to {target}, not {hint}")
            mapping[g] = Word.gen(target)
    new_gens = []
    for g in P.generators:
        h = mapping[g].letters[0][0] if g in mapping else g
        if h not in new_gens:
            new_gens.append(h)
    order = {g: k for k, g in enumerate(theorem_generators(n))}
    new_gens.sort(key=lambda g: (order.get(g, len(order)), str(g)))
    rels = [r for r in dedup_relators([r.substitute(mapping) for r in P.relators]) if r]
    ev = {g: (generator_matrix(g, n) if g in order else P.matrix(g)) for g in new_gens}
    return Presentation(tuple(new_gens), tuple(rels), n=n, evaluation=ev)
