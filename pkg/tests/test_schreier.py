from pathlib import Path

import pytest

from gamma2.exactmat import E, F, IntMatrix, format_matrix, is_level2, mod2_image
from gamma2.membership import factor_gl2
from gamma2.presentations import GX, GY, GZ, gamma2_presentation, gl2z_presentation
from gamma2.schreier import (
    B_PRIME, G1, G2, G3, G4, LETTERS, SUBSTITUTION, bar, build_coset_system, cell, derive,
    derive_gamma2_2, rewrite_relator, rewrite_trace, schreier_presentation, schreier_table,
)
from gamma2.verifier import parse_bracketed
from gamma2.words import Word, cyclic_normal_form, evaluate, parse_word

GOLDEN = Path(__file__).parent / "golden"


def _golden_table():
    lines = [l for l in (GOLDEN / "coset_table.txt").read_text().splitlines() if l and not l.startswith("#")]
    return [[c.strip() for c in l.split("|")] for l in lines]


def _golden_rewrites():
    out = []
    for l in (GOLDEN / "rewrites.txt").read_text().splitlines():
        if l and not l.startswith("#"):
            r, i, w = (c.strip() for c in l.split("|"))
            out.append((parse_bracketed(r), int(i), parse_bracketed(w) if w != "1" else Word()))
    return out


def test_coset_system():
    cs = build_coset_system()
    assert len(cs) == 6
    assert cs.matrices[4] == IntMatrix([[1, 1], [1, 0]])
    assert len({mod2_image(a) for a in cs.matrices}) == 6
    assert cs.action[((GX, 1), 0)] == 1
    for letter in LETTERS:
        assert sorted(cs.action[(letter, i)] for i in range(6)) == list(range(6))


def test_bar():
    assert bar(IntMatrix.identity(2)) == 0
    assert bar(gl2z_presentation().matrix(GX)) == 1
    assert bar(gl2z_presentation().matrix(GZ)) == 3


def test_table_matches_golden():
    table = schreier_table()
    golden = _golden_table()
    assert len(golden) == 6
    for i in range(6):
        assert [format_matrix(c.value) for c in table[i]] == golden[i]


def test_table_cells():
    assert cell((GX, 1), 0).symbol == Word.gen(G1, -1)
    assert cell((GY, 1), 2).symbol == Word.gen(G3)
    for i in range(6):
        assert cell((GZ, 1), i).value.is_identity() and not cell((GZ, 1), i).symbol
    for row in schreier_table():
        for c in row:
            assert is_level2(c.value)
            assert c.value.is_identity() == (not c.symbol)
    d = cell((GX, 1), 0).as_dict()
    assert d == {"w": "x", "i": 0, "matrix": "1,-2;0,1", "symbol": "g1^-1"}


def test_rewrites_match_displayed_words():
    for r, i, want in _golden_rewrites():
        assert rewrite_relator(r, i) == want, (r, i)


def test_rewrite_trace_matches_display():
    r = parse_word("x y x y^-1 x^-1 y^-1")
    # [x a1][y a4][x a3][y^-1 a5][x^-1 a2][y^-1 a0] for coset 0
    assert [c for _, c in rewrite_trace(r, 0)] == [1, 4, 3, 5, 2, 0]


def test_rewrite_rejects_non_relator():
    with pytest.raises(Exception):
        rewrite_relator(parse_word("x"), 0)


def test_rewrites_evaluate_to_identity():
    P = gl2z_presentation()
    for r in P.relators:
        for i in range(6):
            assert evaluate(rewrite_relator(r, i), 2, B_PRIME).is_identity()


def test_schreier_presentation_has_eight_relators():
    P = schreier_presentation()
    assert len(P.relators) == 8
    displayed = ["(g4 g3^-1)^2", "(g1^-1 g3 g4)^2", "g4^2", "(g2 g1^-1)^2", "(g3^-1 g1 g2)^2",
                 "g2^2", "(g4 g3^-1 g1 g2)^2", "(g1^-1 g3 g4 g2)^2"]
    assert P.normal_forms() == {cyclic_normal_form(parse_bracketed(s)) for s in displayed}


def test_substitution_matches_matrices():
    for g, w in SUBSTITUTION.items():
        assert evaluate(w, 2) == B_PRIME[g]


def test_derivation_endpoint():
    d = derive()
    assert d.matches
    P = derive_gamma2_2()
    assert set(P.generators) == {E(1, 2), E(2, 1), F(1), F(2)}
    assert P.normal_forms() == gamma2_presentation(2).normal_forms()


def test_coset_zero_stabilizer_is_level2(rng):
    cs = build_coset_system()
    P = gl2z_presentation()
    for _ in range(200):
        letters = [rng.choice(LETTERS) for _ in range(rng.randint(0, 10))]
        coset = 0
        for letter in reversed(letters):
            coset = cs.action[(letter, coset)]
        assert (coset == 0) == is_level2(evaluate(letters, 2, P.evaluation))


def test_random_ambient_words_rewrite(rng):
    # s-words of conjugated relators are still trivial in the subgroup
    P = gl2z_presentation()
    for _ in range(20):
        A = IntMatrix([[1, rng.randint(-3, 3)], [0, 1]]) @ IntMatrix([[1, 0], [rng.randint(-3, 3), 1]])
        u = factor_gl2(A)
        r = P.relators[rng.randrange(4)]
        conj = u * r * Word([(g, -e) for g, e in reversed(u.letters)])
        for i in range(6):
            assert evaluate(rewrite_relator(conj, i), 2, B_PRIME).is_identity()
