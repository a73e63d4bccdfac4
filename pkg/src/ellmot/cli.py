"""Command-line front end.

Exit status: 0 success, 2 parse error, 3 verification failure, 4 improper
intersection or composition.  All numbers are printed as exact fractions.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .correspondences import CorrespondenceCycle, ImproperComposition, compose, from_cycle, parse_graphs
from .cycles import CycleError, ImproperIntersection, LinearCycle, WitnessCycle, format_coeff
from .grammar import ParseError, format_cycle, parse_cycle
from .theta import InvalidExpression, ThetaParseError

OK, PARSE_ERROR, VERIFY_FAILED, IMPROPER = 0, 2, 3, 4


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


# --- cycles ------------------------------------------------------------------------------------

def cmd_theta_check(args, out) -> int:
    from .theta import check_rationality, divisor_of, parse_theta
    expr, names = parse_theta(args.expression)
    report = check_rationality(expr)
    out.write(f"variables: {' '.join(names)}\n{report}\n")
    if not report.valid:
        out.write("FAIL\n")
        return VERIFY_FAILED
    if args.divisor:
        out.write(f"divisor:\n{divisor_of(expr)}\n")
    out.write("PASS\n")
    return OK


def cmd_normal_form(args, out) -> int:
    from .rewriting import normal_form, verify_with_oracle
    from .cycles import boundary
    g = parse_cycle(args.expression, args.ambient)
    if isinstance(g, WitnessCycle):
        raise ParseError("normal-form expects a level-0 cycle", 0, args.expression)
    r = normal_form(g)
    out.write(f"normal: {format_cycle(r.normal) if r.normal else '0'}\n")
    out.write(f"witness: {format_cycle(r.witness) if r.witness else '0'}\n")
    for step in r.rule_trace:
        out.write(f"  {step}\n")
    if args.verify:
        exact = boundary(r.witness) == r.input - r.normal
        oracle = verify_with_oracle(r)
        out.write(f"boundary check: {_verdict(exact)}\noracle check: {_verdict(oracle)}\n")
        out.write(_verdict(exact and oracle and r.in_s()) + "\n")
        if not (exact and oracle and r.in_s()):
            return VERIFY_FAILED
    return OK


def cmd_realize(args, out) -> int:
    from .cohomology import basis, check_kernel, realization_matrix, word_name
    g = parse_cycle(args.expression, args.ambient)
    if isinstance(g, WitnessCycle):
        out.write("witness cycles realize to 0\n")
        return OK
    if args.kernel:
        in_kernel = check_kernel(g)
        out.write(f"kernel: {'yes' if in_kernel else 'no'}\n")
        return OK
    source = args.source if args.source is not None else g.ambient // 2
    mat = realization_matrix(g, source)
    cols = [word_name(w) for w in basis(mat.source)]
    rows = [word_name(w) for w in basis(mat.target)]
    width = max(len(x) for x in rows + cols + [format_coeff(x) for r in mat.rows for x in r])
    out.write(" " * width + " | " + " ".join(c.rjust(width) for c in cols) + "\n")
    for name, r in zip(rows, mat.rows):
        out.write(name.rjust(width) + " | " + " ".join(format_coeff(x).rjust(width) for x in r) + "\n")
    return OK


def _correspondence(text: str, source: int | None) -> CorrespondenceCycle:
    if "graph(" in text:
        return parse_graphs(text)
    g = parse_cycle(text)
    if isinstance(g, WitnessCycle):
        raise ParseError("expected a level-0 cycle or graph(...) terms", 0, text)
    if source is None:
        if g.ambient % 2:
            raise ParseError("odd ambient dimension: give --source", 0, text)
        source = g.ambient // 2
    return from_cycle(g, source)


def cmd_compose(args, out) -> int:
    a = _correspondence(args.first, args.source_first)
    b = _correspondence(args.second, args.source_second)
    c = compose(a, b, strict=args.strict)
    out.write(f"E^{c.source} -> E^{c.target}\n{c}\n")
    if args.verify:
        ok = c.realization() == b.realization() @ a.realization()
        out.write(f"realization is the matrix product: {_verdict(ok)}\n")
        if not ok:
            return VERIFY_FAILED
    return OK


def cmd_intersect(args, out) -> int:
    from .correspondences import intersection_number
    divisors = []
    for text in args.divisors:
        g = parse_cycle(text, args.ambient)
        if not isinstance(g, LinearCycle) or any(len(m.factors) != 1 for m in g.terms):
            raise ParseError("each argument must be a combination of single divisors", 0, text)
        divisors.append(dict(from_cycle(g, 0).terms))
    out.write(f"{format_coeff(intersection_number(divisors))}\n")
    return OK


# --- symmetric groups ------------------------------------------------------------------------

def _parse_tableau(text: str):
    try:
        rows = tuple(tuple(int(x) for x in row.replace(",", " ").split()) for row in text.split("/"))
    except ValueError:
        raise ParseError("tableau rows are integers separated by spaces, rows by '/'", 0, text) from None
    from .young import is_standard
    if not rows or not all(rows) or not is_standard(rows):
        raise ParseError("not a standard tableau", 0, text)
    return rows


def cmd_tableaux(args, out) -> int:
    from .young import format_tableau, hook_length_count, partitions, shape_of, standard_tableaux
    tabs = standard_tableaux(args.n)
    for t in tabs:
        out.write(f"{format_tableau(t)}  shape {shape_of(t)}\n")
    oracle = sum(hook_length_count(p) for p in partitions(args.n))
    out.write(f"count: {len(tabs)} (hook-length formula: {oracle})\n")
    return OK if len(tabs) == oracle else VERIFY_FAILED


def cmd_symmetrizer(args, out) -> int:
    from .young import orthogonal_idempotent, young_symmetrizer
    t = _parse_tableau(args.tableau)
    e = orthogonal_idempotent(t) if args.orthogonal else young_symmetrizer(t)
    out.write(f"{e}\n")
    if args.verify:
        ok = e * e == e
        out.write(f"idempotent: {_verdict(ok)}\n")
        if not ok:
            return VERIFY_FAILED
    return OK


# --- complexes -----------------------------------------------------------------------------

def _report(label: str, report, out) -> bool:
    out.write(f"{label}: {report}\n")
    return report.ok


def cmd_resolve(args, out) -> int:
    from .dg import check_dg, resolve
    from .persist import dump_resolution, loads
    doc = loads(Path(args.file).read_text())
    if not _report("input", check_dg(doc.complex), out):
        return VERIFY_FAILED
    res = resolve(doc.complex)
    text = dump_resolution(res)
    if args.out:
        Path(args.out).write_text(text)
        out.write(f"wrote {args.out}\n")
    else:
        out.write(text)
    if args.verify:
        ok = _report("output", check_dg(res.complex), out)
        ok &= _report("comparison", res.check_comparison(), out)
        if not ok:
            return VERIFY_FAILED
    return OK


def cmd_pi1(args, out) -> int:
    from .dg import check_dg
    from .persist import dump_resolution
    from .pi1 import BasepointConfig, build_pi1_complex, free_algebra_dimension, p1_walkthrough
    if args.p1:
        K, res, entry = p1_walkthrough(args.b)
        out.write(f"terminal entry: {entry}\n")
        if args.out:
            Path(args.out).write_text(dump_resolution(res))
            out.write(f"wrote {args.out}\n")
        if args.verify:
            ok = _report("input", check_dg(K), out) & _report("output", check_dg(res.complex), out)
            out.write(_verdict(ok) + "\n")
            return OK if ok else VERIFY_FAILED
        return OK
    built = build_pi1_complex(args.n, BasepointConfig(args.a, args.b), bound=args.bound)
    K = built.complex
    out.write(f"positions: {' '.join(map(str, K.positions()))}\n")
    out.write(f"summands: {sum(len(v) for v in K.objects.values())}\n")
    if args.out:
        Path(args.out).write_text(dump_resolution(built.resolution))
        out.write(f"wrote {args.out}\n")
    if args.verify:
        ok = _report("input", check_dg(K), out)
        ok &= _report("output", check_dg(built.resolution.complex), out)
        ok &= _report("comparison", built.resolution.check_comparison(), out)
        ranks = built.resolved_cohomology()
        for deg in sorted(ranks):
            out.write(f"degree {deg}: {ranks[deg]}\n")
        expected = free_algebra_dimension(2, args.n)
        out.write(f"free algebra words of length <= {args.n}: {expected}\n")
        ok &= ranks == {0: expected}
        out.write(_verdict(ok) + "\n")
        if not ok:
            return VERIFY_FAILED
    return OK


def cmd_repro(args, out) -> int:
    from .acceptance import run_all
    selected = [int(x) for x in args.only.split(",")] if args.only else None
    ok = True
    for result in run_all(selected):
        out.write(result.line() + "\n")
        out.flush()
        ok &= result.ok
    return OK if ok else VERIFY_FAILED


# --- entry point ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ellmot", description="Linear cycles, correspondences and "
                                     "DG resolutions for elliptic motives.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("theta-check", help="certify a theta quotient by its Gram identity")
    p.add_argument("expression")
    p.add_argument("--divisor", action="store_true", help="also print its divisor")
    p.set_defaults(func=cmd_theta_check)

    p = sub.add_parser("normal-form", help="rewrite a cycle to its normal form with witness")
    p.add_argument("expression")
    p.add_argument("--ambient", type=int)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_normal_form)

    p = sub.add_parser("realize", help="Betti realization matrix of a cycle")
    p.add_argument("expression")
    p.add_argument("--ambient", type=int)
    p.add_argument("--source", type=int, help="dimension of the source factor (default: half)")
    p.add_argument("--kernel", action="store_true", help="only report whether the realization vanishes")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("compose", help="compose two correspondences, first then second")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--source-first", type=int)
    p.add_argument("--source-second", type=int)
    p.add_argument("--strict", action="store_true", help="reject excess intersections")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("intersect", help="intersection number of m divisors on E^m")
    p.add_argument("divisors", nargs="+")
    p.add_argument("--ambient", type=int)
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("tableaux", help="standard tableaux of size n")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_tableaux)

    p = sub.add_parser("symmetrizer", help="Young symmetrizer of a tableau such as '1 2/3'")
    p.add_argument("tableau")
    p.add_argument("--orthogonal", action="store_true", help="the member of the orthogonal family instead")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_symmetrizer)

    p = sub.add_parser("resolve", help="resolve a stored DG complex")
    p.add_argument("file")
    p.add_argument("--out")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("pi1", help="the truncated fundamental-group complex of E - O")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--a", default="a")
    p.add_argument("--b", default="b")
    p.add_argument("--bound", type=int, default=3)
    p.add_argument("--out")
    p.add_argument("--p1", action="store_true", help="run the projective-line walkthrough instead")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_pi1)

    p = sub.add_parser("repro", help="run the end-to-end checks")
    p.add_argument("--only", help="comma-separated check numbers")
    p.set_defaults(func=cmd_repro)
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return PARSE_ERROR if exc.code else OK
    try:
        return args.func(args, out)
    except (ImproperIntersection, ImproperComposition) as exc:
        out.write(f"improper: {exc}\n")
        return IMPROPER
    except (ParseError, ThetaParseError) as exc:
        out.write(f"parse error: {exc}\n")
        return PARSE_ERROR
    except InvalidExpression as exc:
        out.write(f"invalid: {exc}\n")
        return PARSE_ERROR
    except (CycleError, ValueError) as exc:
        out.write(f"error: {exc}\n")
        return PARSE_ERROR


if __name__ == "__main__":
    sys.exit(main())
