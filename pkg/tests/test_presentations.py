import json
import random
from pathlib import Path

import pytest
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from gamma2.exactmat import E, F, Named, generator_matrix, is_level2
from gamma2.presentations import (
    AbelianInvariants, Presentation, PresentationError, PresentationParseError,
    abelianization_invariants, expected_family_counts, exponent_matrix, gamma2_presentation,
    gl2z_presentation, parse, serialize, smith_diagonal, stabilizer_presentation,
)
from gamma2.words import Word, commutator, parse_word

GOLDEN = Path(__file__).parent / "golden"


def test_small_presentations():
    P1 = gamma2_presentation(1)
    assert [str(g) for g in P1.generators] == ["F(1)"] and [str(r) for r in P1.relators] == ["F(1)^2"]
    P2 = gamma2_presentation(2)
    want = ["F(1)^2", "F(2)^2", "(E(1,2) F(1))^2", "(E(1,2) F(2))^2", "(E(2,1) F(1))^2",
            "(E(2,1) F(2))^2", "(F(1) F(2))^2"]
    from gamma2.verifier import parse_bracketed
    from gamma2.words import cyclic_normal_form
    assert P2.normal_forms() == {cyclic_normal_form(parse_bracketed(s)) for s in want}


def test_counts():
    assert [len(gamma2_presentation(n).relators) for n in range(1, 7)] == [1, 7, 37, 122, 305, 641]
    assert gamma2_presentation(3).family_counts() == {"1": 3, "2": 15, "3a": 18, "3b": 1}
    for n in range(2, 7):
        P = gamma2_presentation(n)
        assert len(P.generators) == n * n
        assert P.family_counts()["1"] == n
        assert P.family_counts()["2"] == 2 * n * (n - 1) + n * (n - 1) // 2
        assert {k: v for k, v in P.family_counts().items()} == {
            k: v for k, v in expected_family_counts(n).items() if v}


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_relators_evaluate_to_identity(n):
    P = gamma2_presentation(n)
    assert all(P.evaluate(r).is_identity() for r in P.relators)


def test_gl2z():
    P = gl2z_presentation()
    assert len(P.relators) == 4
    for r in P.relators:
        assert P.evaluate(r).is_identity()
    assert serialize(P, "gap") + "\n" == (GOLDEN / "gl2z.g").read_text()


def test_stabilizer_presentation():
    P = stabilizer_presentation(3, 1, gamma2_presentation(2))
    assert len(P.generators) == 6
    for g in P.generators:
        M = P.matrix(g)
        assert is_level2(M) and M.column(1) == (1, 0, 0)
    assert all(P.evaluate(r).is_identity() for r in P.relators)
    Q = stabilizer_presentation(2, 1, gamma2_presentation(1))
    names = {str(g) for g in Q.generators}
    assert names == {"E12_e1", "F2_e1"}
    sq = (Word.gen(Named("E12_e1")) * Word.gen(Named("F2_e1"))) ** 2
    from gamma2.words import cyclic_normal_form
    assert cyclic_normal_form(sq) in Q.normal_forms()
    for t in (1, 2, 3, 4):
        S = stabilizer_presentation(4, t, gamma2_presentation(3))
        assert all(S.evaluate(r).is_identity() for r in S.relators)
        assert all(S.matrix(g).column(t) == tuple(int(k == t) for k in range(1, 5)) for g in S.generators)


def test_stabilizer_errors():
    with pytest.raises(PresentationError):
        stabilizer_presentation(3, 4, gamma2_presentation(2))
    with pytest.raises(PresentationError):
        stabilizer_presentation(3, 1, gamma2_presentation(3))


def test_abelianization_examples():
    a, b = Named("a"), Named("b")
    P = Presentation((a,), (Word.gen(a, 2),))
    assert abelianization_invariants(P) == AbelianInvariants(0, (2,))
    Q = Presentation((a, b), (commutator(Word.gen(a), Word.gen(b)),))
    assert abelianization_invariants(Q) == AbelianInvariants(2, ())


def _sympy_invariants(P):
    M = exponent_matrix(P)
    ngen = len(P.generators)
    if not M:
        return AbelianInvariants(ngen, ())
    snf = smith_normal_form(Matrix(M), domain=ZZ)
    diag = [abs(int(snf[i, i])) for i in range(min(snf.shape))]
    nonzero = [d for d in diag if d]
    return AbelianInvariants(ngen - len(nonzero), tuple(d for d in nonzero if d > 1))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_abelianization_against_sympy(n):
    P = gamma2_presentation(n)
    assert abelianization_invariants(P) == _sympy_invariants(P)


def test_abelianization_golden_gamma2_2():
    # fixed from the sympy Smith normal form before the main build
    assert abelianization_invariants(gamma2_presentation(2)) == AbelianInvariants(0, (2, 2, 2, 2))
    assert abelianization_invariants(gamma2_presentation(3)) == AbelianInvariants(0, (2,) * 9)


def test_smith_diagonal_random_against_sympy():
    rng = random.Random(3)
    for _ in range(40):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        M = [[rng.randint(-6, 6) for _ in range(c)] for _ in range(r)]
        snf = smith_normal_form(Matrix(M), domain=ZZ)
        want = [abs(int(snf[i, i])) for i in range(min(r, c))]
        assert sorted(d for d in smith_diagonal(M) if d) == sorted(d for d in want if d)


def test_abelianization_invariance():
    P = gamma2_presentation(3)
    base = abelianization_invariants(P)
    rels = list(P.relators)
    random.Random(1).shuffle(rels)
    gens = list(reversed(P.generators))
    assert abelianization_invariants(Presentation(tuple(gens), tuple(rels), n=3)) == base


def test_serialize_roundtrip():
    for n in (1, 2, 3):
        P = gamma2_presentation(n)
        for fmt in ("json", "plain"):
            Q = parse(serialize(P, fmt), fmt)
            assert Q.generators == P.generators and Q.relators == P.relators
    doc = json.loads(serialize(gamma2_presentation(1), "json"))
    assert doc == {"n": 1, "generators": ["F(1)"], "relators": ["F(1)^2"]}
    assert serialize(gamma2_presentation(1), "plain") == "gens: F(1); rels: F(1)^2"


def test_serialize_named_generators_keep_evaluation():
    P = stabilizer_presentation(3, 2, gamma2_presentation(2))
    Q = parse(serialize(P, "json"), "json")
    assert Q.generators == P.generators
    assert all(Q.matrix(g) == P.matrix(g) for g in P.generators)


def test_parse_errors():
    with pytest.raises(PresentationParseError) as exc:
        parse("garbage", "json")
    assert exc.value.pos is not None
    with pytest.raises(PresentationParseError):
        parse("gens: F(1); rels: F(1)^", "plain")
    with pytest.raises(PresentationError):
        parse("", "gap")


def test_presentation_rejects_unknown_symbols():
    with pytest.raises(PresentationError):
        Presentation((F(1),), (parse_word("F(2)"),), n=2)
