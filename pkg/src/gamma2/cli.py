"""Command line interface: ``gamma2 <command> ...``.

Exit codes: 0 success, 1 usage or parse error, 2 non-member, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .complex import assemble, build_B_mod2, edge_stabilizer_data, excluded_triples, orbit_complex, vertex_stabilizer
from .exactmat import MatrixError, format_matrix, parse_matrix
from .membership import NotInSubgroup, factor, factor_with_trace
from .presentations import gamma2_presentation, serialize
from .schreier import coset_system, derive, format_table, schreier_table
from .verifier import (
    Report,
    check_appendix_identities,
    check_assembly,
    check_edge_systems,
    check_theorem_presentation,
    roundtrip_suite,
)
from .words import WordParseError, evaluate, format_word, parse_word

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_VERIFY = 0, 1, 2, 3
DEFAULT_SEED = 7
FORMATS = {"text": "plain", "plain": "plain", "json": "json", "gap": "gap"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _check_n(n: int, lo: int, hi: int | None = None):
    if n < lo or (hi is not None and n > hi):
        bound = f"{lo} <= n" + (f" <= {hi}" if hi is not None else "")
        raise UsageError(f"n={n} out of range ({bound})")


def cmd_present(args) -> int:
    _check_n(args.n, 1, 6)
    print(serialize(gamma2_presentation(args.n), FORMATS[args.format]))
    return EXIT_OK


def _emit_reports(reports: list[Report], fmt: str, verbose: bool = False) -> int:
    if fmt == "json":
        docs = [r.to_dict() for r in reports]
        print(json.dumps(docs[0] if len(docs) == 1 else docs, indent=2))
    else:
        for r in reports:
            print(r.to_text() if verbose else r.summary())
            for label, ok, detail in r.checks:
                if not ok and not verbose:
                    print(f"  FAIL {label} ({detail})")
    return EXIT_OK if all(r.ok for r in reports) else EXIT_VERIFY


def cmd_verify(args) -> int:
    reports = []
    if args.n is not None:
        _check_n(args.n, 1, 6)
        reports.append(check_theorem_presentation(args.n))
    if args.appendix:
        reports.append(check_appendix_identities())
    if args.edges:
        reports.append(check_edge_systems())
    if args.assembly is not None:
        _check_n(args.assembly, 3, 6)
        reports.append(check_assembly(args.assembly))
    if args.roundtrip is not None:
        _check_n(args.roundtrip, 2)
        reports.append(roundtrip_suite(args.roundtrip, args.trials, args.max_len, args.seed))
    if not reports:
        raise UsageError("verify needs one of --n, --appendix, --edges, --assembly, --roundtrip")
    return _emit_reports(reports, args.format, args.verbose)


def cmd_eval(args) -> int:
    _check_n(args.n, 1)
    w = parse_word(args.word)
    for g in w.symbols():
        if not g.fits(args.n):
            raise UsageError(f"{g} is not a generator in dimension {args.n}")
    print(format_matrix(evaluate(w, args.n)))
    return EXIT_OK


def cmd_factor(args) -> int:
    A = parse_matrix(args.matrix)
    if args.n is not None and A.n != args.n:
        raise UsageError(f"matrix has dimension {A.n}, expected {args.n}")
    try:
        w, traces = factor_with_trace(A) if args.trace else (factor(A), [])
    except NotInSubgroup:
        print(f"not in Gamma_2({A.n})", file=sys.stderr)
        return EXIT_DOMAIN
    print(format_word(w))
    for t, tr in enumerate(traces, 1):
        print(f"column {t}: " + " ".join(map(str, tr.metrics)))
    return EXIT_OK



def cmd_rs(args) -> int:
    table = schreier_table()
    d = derive(check=False)
    rels = coset_system().ambient.relators
    if args.format == "json":
        doc = {
            "table": [c.as_dict() for row in table for c in row],
            "rewrites": [
                {"relator": str(rels[k]), "i": i, "word": str(w)} for (k, i), w in sorted(d.rewrites.items())
            ],
            "schreier": json.loads(serialize(d.schreier, "json")),
            "presentation": json.loads(serialize(d.result, "json")),
            "matches": d.matches,
        }
        print(json.dumps(doc, indent=2))
    else:
        print("Table: matrix bar(w a_i)^-1 w a_i")
        print(format_table(table))
        print()
        for (k, i), w in sorted(d.rewrites.items()):
            print(f"s[{rels[k]}, {i}] = {w}")
        print()
        print("before substitution: " + serialize(d.schreier, "plain"))
        print("result: " + serialize(d.result, "plain"))
        print("matches expected presentation: " + ("yes" if d.matches else "no"))
    return EXIT_OK if d.matches else EXIT_VERIFY


def cmd_complex(args) -> int:
    _check_n(args.n, 2, 4)
    cx = build_B_mod2(args.n)
    out = {
        "n": args.n,
        "mod2_complex": {"vertices": len(cx.vertices), "f_vector": cx.f_vector(),
                         "excluded_triples": excluded_triples(cx)},
        "orbit_complex": {"f_vector": orbit_complex(args.n).f_vector()},
    }
    if args.n == 3:
        out["vertex_stabilizers"] = {
            f"v{i}": [f"{l}={format_matrix(m)}" for l, m, _ in vertex_stabilizer(i).generators]
            for i in range(1, 8)
        }
        out["edge_stabilizers"] = {
            f"v{i}v{j}": [format_matrix(m) for m in s.matrices()]
            for (i, j), s in sorted(edge_stabilizer_data().items())
        }
    if args.format == "json":
        print(json.dumps(out, indent=2))
    else:
        m = out["mod2_complex"]
        print(f"B_{args.n}(Z_2): {m['vertices']} vertices, f-vector {m['f_vector']}")
        if m["excluded_triples"]:
            print("non-simplex triples: " + " ".join("{%s}" % ",".join(map(str, t)) for t in m["excluded_triples"]))
        print(f"orbit complex f-vector: {out['orbit_complex']['f_vector']}")
        for key in ("vertex_stabilizers", "edge_stabilizers"):
            for name, gens in out.get(key, {}).items():
                print(f"{name}: " + "  ".join(gens))
    return EXIT_OK


def cmd_assemble(args) -> int:
    _check_n(args.n, 3, 6)
    a = assemble(args.n)
    P = a.presentation
    bad = [r for r in P.relators if not P.evaluate(r).is_identity()]
    if args.format == "text":
        print(f"vertices: {a.vertex_count}, edges: {a.edge_count}, "
              f"generators: {len(P.generators)}, relators: {len(P.relators)}")
    else:
        print(serialize(P, FORMATS[args.format]))
    if bad:
        print(f"{len(bad)} relators do not evaluate to the identity", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gamma2", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("present", help="print the presentation of Gamma_2(n)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--format", choices=["text", "json", "gap"], default="text")
    s.set_defaults(func=cmd_present)

    s = sub.add_parser("verify", help="run verification suites")
    s.add_argument("--n", type=int)
    s.add_argument("--appendix", action="store_true")
    s.add_argument("--edges", action="store_true")
    s.add_argument("--assembly", type=int, metavar="N")
    s.add_argument("--roundtrip", type=int, metavar="N")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--max-len", type=int, default=20)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.add_argument("--verbose", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("eval", help="evaluate a word")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--word", required=True)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("factor", help="write a matrix as a word")
    s.add_argument("--n", type=int)
    s.add_argument("--matrix", required=True)
    s.add_argument("--trace", action="store_true")
    s.set_defaults(func=cmd_factor)

    s = sub.add_parser("rs", help="Reidemeister-Schreier derivation for n = 2")
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.set_defaults(func=cmd_rs)

    s = sub.add_parser("complex", help="complex and stabilizer summary")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.set_defaults(func=cmd_complex)

    s = sub.add_parser("assemble", help="assemble a presentation from the group action")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--format", choices=["text", "json", "gap"], default="text")
    s.set_defaults(func=cmd_assemble)
    return p


_VALUE_FLAGS = ("--matrix", "--word")


def _attach_values(argv: list[str]) -> list[str]:
    """Join "--matrix -1,0;0,1" into "--matrix=-1,0;0,1" so a leading minus
    is not mistaken for an option."""
    out, k = [], 0
    while k < len(argv):
        if argv[k] in _VALUE_FLAGS and k + 1 < len(argv):
            out.append(f"{argv[k]}={argv[k + 1]}")
            k += 2
        else:
            out.append(argv[k])
            k += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_attach_values(argv))
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (WordParseError, MatrixError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
