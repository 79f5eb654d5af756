import itertools

import pytest

from gamma2.complex import (
    EDGE_FAMILIES, VERTEX_VECTORS, AssemblyError, assemble, brown_assemble, build_B_mod2,
    conjugation_transport, edge_stabilizer_data, excluded_triples, family_images, identify,
    is_extension, orbit_complex, vertex_conjugator, vertex_stabilizer, word_at_axis, word_at_vertex,
)
from gamma2.exactmat import E, F, S, IntMatrix, generator_matrix, is_level2, theorem_generators
from gamma2.presentations import gamma2_presentation

EXPECTED_EXCLUDED = {(1, 2, 4), (1, 3, 5), (1, 6, 7), (2, 3, 6), (2, 5, 7), (3, 4, 7), (4, 5, 6)}


def test_B_mod2_three():
    cx = build_B_mod2(3)
    assert len(cx.vertices) == 7
    assert [cx.vertices[i - 1] for i in range(1, 8)] == [VERTEX_VECTORS[i] for i in range(1, 8)]
    assert cx.f_vector() == [7, 21, 28]
    assert set(excluded_triples(cx)) == EXPECTED_EXCLUDED
    assert cx.is_downward_closed()


def test_B_mod2_bounds():
    assert build_B_mod2(2).f_vector() == [3, 3]
    assert build_B_mod2(4).count(0) == 15
    with pytest.raises(ValueError):
        build_B_mod2(5)


def test_orbit_complex():
    assert orbit_complex(4).f_vector() == [4, 6, 4, 1]
    assert orbit_complex(2).f_vector() == [2, 1]
    cx = orbit_complex(3)
    for d, simps in cx.simplices.items():
        for s in simps:
            assert is_extension(IntMatrix.identity(3), [cx.vertices[i] for i in s])


def test_is_extension():
    assert is_extension(IntMatrix.identity(2), [(1, 0), (0, 1)])
    assert is_extension(generator_matrix(E(1, 2), 2), [(1, 0)])
    assert not is_extension(IntMatrix.identity(2), [(1, 2)])


def test_vertex_stabilizers():
    v1 = vertex_stabilizer(1)
    assert len(v1.generators) == 6
    for i in VERTEX_VECTORS:
        sys = vertex_stabilizer(i)
        assert not sys.violations()
        assert sys.fixed == (VERTEX_VECTORS[i],)
        P = sys.presentation
        assert all(P.evaluate(r).is_identity() for r in P.relators)
        assert len(P.relators) == 16
    assert vertex_conjugator(2) @ generator_matrix(E(2, 3), 3) @ vertex_conjugator(2).inverse() == \
        generator_matrix(E(1, 3), 3)


def test_conjugation_transport():
    v1 = vertex_stabilizer(1)
    same = conjugation_transport(IntMatrix.identity(3), v1)
    assert same.matrices() == v1.matrices() and same.presentation.relators == v1.presentation.relators
    X = generator_matrix(S(2), 3) @ generator_matrix(S(1), 3)
    moved = conjugation_transport(X, v1, lambda s: s + "_t")
    assert moved.fixed == ((0, 0, 1),)
    assert all(m.apply((0, 0, 1)) == (0, 0, 1) for m in moved.matrices())
    P = moved.presentation
    assert all(P.evaluate(r).is_identity() for r in P.relators)


def test_edge_data():
    data = edge_stabilizer_data()
    assert len(data) == 21
    assert set(data) == set(itertools.combinations(range(1, 8), 2))
    first = set(data[(1, 2)].matrices())
    assert first == {generator_matrix(E(1, 3), 3), generator_matrix(E(2, 3), 3), generator_matrix(F(3), 3)}
    for m in first:
        assert m.apply((1, 0, 0)) == (1, 0, 0) and m.apply((0, 1, 0)) == (0, 1, 0)
    for sys in data.values():
        assert not sys.violations()
    for fam in EDGE_FAMILIES:
        assert family_images(fam) == set(fam.matrices)
    X = generator_matrix(S(2), 3)
    assert set(data[(1, 3)].matrices()) == {X @ m @ X.inverse() for m in first}


def test_words_at_vertices():
    for fam in EDGE_FAMILIES:
        for i, j in fam.edges:
            for M in fam.matrices:
                for v in (i, j):
                    w = word_at_vertex(M, v)
                    assert all(g.label.endswith(f"_v{v}") for g in w.symbols())
    with pytest.raises(AssemblyError):
        word_at_vertex(generator_matrix(E(2, 1), 3), 1)


def test_word_at_axis():
    M = generator_matrix(E(1, 3), 4)
    w = word_at_axis(M, 2)
    assert [str(g) for g in w.symbols()] == ["E13_e2"]
    with pytest.raises(AssemblyError):
        word_at_axis(M, 3)


def test_assembly_three():
    a = assemble(3)
    assert a.vertex_count == 7 and a.edge_count == 21
    P = a.presentation
    assert len(P.generators) == 42
    assert P.family_counts() == {"vertex": 112, "edge": 63}
    assert all(P.evaluate(r).is_identity() for r in P.relators)
    mats = {P.matrix(g) for g in P.generators}
    assert all(generator_matrix(g, 3) in mats for g in theorem_generators(3))
    assert a.plan.spans(7) and len(a.plan.triangles) == 28


@pytest.mark.parametrize("n", [4, 5])
def test_assembly_induction(n):
    P = brown_assemble(n)
    assert all(P.evaluate(r).is_identity() for r in P.relators)
    ident = identify(P)
    assert list(ident.generators) == theorem_generators(n)
    assert {ident.matrix(g) for g in ident.generators} == {generator_matrix(g, n) for g in theorem_generators(n)}
    assert ident.normal_forms() == gamma2_presentation(n).normal_forms()


def test_assembly_bounds():
    with pytest.raises(ValueError):
        assemble(2)
