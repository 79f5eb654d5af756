import pytest
from hypothesis import given, settings, strategies as st

from gamma2.exactmat import E, F, IntMatrix, generator_matrix, theorem_generators
from gamma2.membership import NotInSubgroup, factor, factor_gl2, factor_with_trace, reduce_vector
from gamma2.presentations import gl2z_presentation
from gamma2.words import Word, evaluate, format_word

from conftest import random_word


def test_factor_examples():
    assert factor(IntMatrix.identity(3)) == Word()
    assert format_word(factor(generator_matrix(E(1, 2), 3))) == "E(1,2)"
    g4 = IntMatrix([[-1, 0], [2, 1]])
    assert evaluate(factor(g4), 2) == g4
    assert format_word(factor(IntMatrix([[1, 4], [0, 1]]))) == "E(1,2)^2"


def test_factor_rejects_non_members():
    for bad in ([[1, 1], [0, 1]], [[3, 0], [0, 1]], [[0, 1], [1, 0]]):
        with pytest.raises(NotInSubgroup):
            factor(IntMatrix(bad))


def test_reduce_vector():
    w, tr = reduce_vector((1, 0), 1)
    assert w == Word()
    w, tr = reduce_vector((1, 2), 1)
    assert evaluate(w, 2).apply((1, 2)) == (1, 0)
    w, _ = reduce_vector((-1, 0), 1)
    assert format_word(w) == "F(1)"
    with pytest.raises(NotInSubgroup):
        reduce_vector((2, 1), 1)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_roundtrip(n, rng):
    for _ in range(100):
        A = evaluate(random_word(n, rng.randint(0, 20), rng), n)
        w = factor(A)
        assert evaluate(w, n) == A
        assert all(g.kind in "EF" and g.fits(n) for g in w.symbols())
        assert evaluate(factor(A.inverse()), n) == A.inverse()


def test_metrics_strictly_decrease(rng):
    for n in (2, 3, 4):
        for _ in range(50):
            A = evaluate(random_word(n, 25, rng), n)
            w, traces = factor_with_trace(A)
            assert evaluate(w, n) == A
            for tr in traces:
                assert all(a > b for a, b in zip(tr.metrics, tr.metrics[1:]))
            for t in range(1, n + 1):
                v = A.column(t)
                if all(v[k] == 0 for k in range(t - 1)):
                    u, tr = reduce_vector(v, t, pinned=range(1, t))
                    assert evaluate(u, n).apply(v) == tuple(int(k == t - 1) for k in range(n))
                    assert all(a > b for a, b in zip(tr.metrics, tr.metrics[1:]))


def test_column_order(rng):
    A = evaluate(random_word(4, 20, rng), 4)
    for order in ([1, 2, 3, 4], [3, 1, 4, 2], [4, 3, 2, 1]):
        assert evaluate(factor(A, order), 4) == A
    # a matrix fixing e_3 factors into letters that fix e_3 when e_3 is processed first
    B = evaluate(Word.gen(E(3, 1)) * Word.gen(E(1, 2)) * Word.gen(F(2)), 4)
    w = factor(B, [3, 1, 2, 4])
    assert all(g.idx[-1] != 3 for g in w.symbols())


def test_syllable_count_bound(rng):
    # syllables (exponent runs) grow like n^2 times the total bit length of the entries
    for n in (2, 3, 4, 5):
        for _ in range(30):
            A = evaluate(random_word(n, 20, rng), n)
            bits = sum(max(abs(x), 1).bit_length() for row in A.rows for x in row)
            assert len(factor(A).letters) <= 4 * n * n * bits


def test_factor_gl2():
    P = gl2z_presentation()
    assert factor_gl2(IntMatrix.identity(2)) == Word()
    assert format_word(factor_gl2(IntMatrix([[0, 1], [1, 0]]))) == "z"
    xy = IntMatrix([[1, -1], [0, 1]]) @ IntMatrix([[1, 0], [1, 1]])
    assert evaluate(factor_gl2(xy), 2, P.evaluation) == xy
    with pytest.raises(ValueError):
        factor_gl2(IntMatrix([[2, 0], [0, 1]]))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from(["x", "y", "z", "X", "Y"]), max_size=30))
def test_factor_gl2_roundtrip(chars):
    P = gl2z_presentation()
    table = {"x": 1, "X": -1, "y": 1, "Y": -1, "z": 1}
    gens = {c: P.generators["xyz".index(c.lower())] for c in table}
    letters = [(gens[c], table[c]) for c in chars]
    A = evaluate(letters, 2, P.evaluation)
    assert evaluate(factor_gl2(A), 2, P.evaluation) == A
