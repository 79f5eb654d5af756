"""Acceptance criteria, one check per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (each test prints a PASS/FAIL
line) or directly with ``python3 tests/test_acceptance.py``.
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gamma2.complex import (  # noqa: E402
    EDGE_FAMILIES, VERTEX_VECTORS, assemble, build_B_mod2, edge_stabilizer_data, excluded_triples,
    family_images, identify, vertex_stabilizer,
)
from gamma2.exactmat import IntMatrix, enumerate_gl_mod2, format_matrix, generator_matrix, theorem_generators  # noqa: E402
from gamma2.membership import NotInSubgroup, factor  # noqa: E402
from gamma2.presentations import gamma2_presentation  # noqa: E402
from gamma2.schreier import derive, rewrite_relator, schreier_table  # noqa: E402
from gamma2.verifier import (  # noqa: E402
    check_appendix_identities, cross_check_abelianization, parse_bracketed, roundtrip_suite,
)
from gamma2.words import Word  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"
EXPECTED_EXCLUDED = {(1, 2, 4), (1, 3, 5), (1, 6, 7), (2, 3, 6), (2, 5, 7), (3, 4, 7), (4, 5, 6)}


def criterion_1():
    counts = {}
    for n in range(1, 7):
        P = gamma2_presentation(n)
        bad = [r for r in P.relators if not P.evaluate(r).is_identity()]
        if bad:
            return False, f"n={n}: {bad[0]} is not trivial"
        counts[n] = len(P.relators)
    ok = (counts[1], counts[2], counts[3]) == (1, 7, 37)
    return ok, "relator counts " + ", ".join(f"n={n}: {c}" for n, c in counts.items())


def criterion_2():
    golden = [[c.strip() for c in l.split("|")]
              for l in (GOLDEN / "coset_table.txt").read_text().splitlines() if l and not l.startswith("#")]
    got = [[format_matrix(c.value) for c in row] for row in schreier_table()]
    cells = sum(a == b for ga, gb in zip(got, golden) for a, b in zip(ga, gb))
    return cells == 30 and len(golden) == 6, f"{cells}/30 cells match"


def criterion_3():
    total = ok = 0
    for l in (GOLDEN / "rewrites.txt").read_text().splitlines():
        if not l or l.startswith("#"):
            continue
        r, i, w = (c.strip() for c in l.split("|"))
        want = Word() if w == "1" else parse_bracketed(w)
        total += 1
        ok += rewrite_relator(parse_bracketed(r), int(i)) == want
    return ok == total == 24, f"{ok}/{total} displayed s-words reproduced"


def criterion_4():
    d = derive(check=False)
    return d.matches, "generator and relator normal-form sets " + ("identical" if d.matches else d.mismatch_report())


def criterion_5():
    cx = build_B_mod2(3)
    ok = (cx.f_vector() == [7, 21, 28] and set(excluded_triples(cx)) == EXPECTED_EXCLUDED
          and len(enumerate_gl_mod2(2)) == 6 and len(enumerate_gl_mod2(3)) == 168)
    return ok, f"f-vector {cx.f_vector()}, |GL(2,Z2)|={len(enumerate_gl_mod2(2))}, |GL(3,Z2)|={len(enumerate_gl_mod2(3))}"


def criterion_6():
    problems = []
    for i in VERTEX_VECTORS:
        problems += vertex_stabilizer(i).violations()
    data = edge_stabilizer_data()
    for sys in data.values():
        problems += sys.violations()
    for fam in EDGE_FAMILIES:
        if len({frozenset(data[e].matrices()) for e in fam.edges}) != 1 or family_images(fam) != set(fam.matrices):
            problems.append(f"family {fam.edges}")
    families = sum(len(f.edges) == 3 for f in EDGE_FAMILIES)
    singles = sorted(f.edges[0] for f in EDGE_FAMILIES if len(f.edges) == 1)
    ok = not problems and len(data) == 21 and families == 6 and singles == [(4, 5), (4, 6), (5, 6)]
    return ok, f"{len(data)} edges, {families} families, singletons {singles}" + (f"; {problems[:3]}" if problems else "")


def criterion_7():
    parts = []
    for n in (3, 4, 5):
        P = assemble(n).presentation
        if not all(P.evaluate(r).is_identity() for r in P.relators):
            return False, f"n={n}: nontrivial relator"
        mats = {P.matrix(g) for g in P.generators}
        if n >= 4:
            mats = {identify(P).matrix(g) for g in identify(P).generators}
        if not all(generator_matrix(g, n) in mats for g in theorem_generators(n)):
            return False, f"n={n}: missing standard generator"
        parts.append(f"n={n}: {len(P.relators)} relators")
    return True, "; ".join(parts)


def criterion_8():
    reports = [roundtrip_suite(n, 100, 20, 7) for n in (2, 3, 4, 5)]
    empty = factor(IntMatrix.identity(4)) == Word()
    try:
        factor(IntMatrix([[1, 1], [0, 1]]))
        rejects = False
    except NotInSubgroup:
        rejects = True
    ok = all(r.ok and r.passed == 100 for r in reports) and empty and rejects
    return ok, ", ".join(r.summary() for r in reports)


def criterion_9():
    rep = check_appendix_identities()
    return rep.ok, rep.summary()


def criterion_10():
    rep = cross_check_abelianization()
    return rep.ok, rep.summary()


CRITERIA = [
    (1, "relator validity", criterion_1),
    (2, "coset rewriting table reproduction", criterion_2),
    (3, "rewriting reproduction", criterion_3),
    (4, "pipeline endpoint", criterion_4),
    (5, "complex combinatorics", criterion_5),
    (6, "stabilizer and edge contracts", criterion_6),
    (7, "assembly", criterion_7),
    (8, "membership", criterion_8),
    (9, "appendix manifest", criterion_9),
    (10, "abelianization consistency", criterion_10),
]


def _line(k, name, ok, detail):
    return f"criterion {k} ({name}): {'PASS' if ok else 'FAIL'} - {detail}"


@pytest.mark.parametrize("k,name,fn", CRITERIA, ids=[f"criterion_{k}" for k, _, _ in CRITERIA])
def test_criterion(k, name, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + _line(k, name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for k, name, fn in CRITERIA:
        ok, detail = fn()
        failures += not ok
        print(_line(k, name, ok, detail))
    sys.exit(1 if failures else 0)
