"""Command line front end: ``odo <command> ...``.

Operators are given as text ("D^2 - 2/x^2") or as the name of a built-in
example ("EulerL4").  Exit status: 0 success, 2 usage error, 3 math error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from odo.errors import OdoError

EXIT_OK, EXIT_USAGE, EXIT_MATH = 0, 2, 3

# errors that come from malformed input rather than from the mathematics
USAGE_CODES = {
    "PARSE_ERROR", "FIELD_MISMATCH", "UNKNOWN_FIELD", "UNKNOWN_EXAMPLE", "M_MULTIPLE_OF_N",
    "K_OUT_OF_RANGE", "ARITY_MISMATCH", "UNSUPPORTED_GENERATORS", "BAD_ORDER", "BAD_ARGUMENT",
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    p.add_argument("--field", help="ratfunc_x (default), hyperbolic or rational")
    p.add_argument("--json", action="store_true", help="print one JSON document")
    p.add_argument("--term-order", dest="term_order", help="lex, grlex, grevlex or weighted:w1,w2,...")
    p.add_argument("--truncation", type=int, help="lowest power of D kept in pseudo-differential output")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = _Parser(prog="odo", description="Commuting ordinary differential operators.", parents=[common])
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def cmd(name, help_, *ops, nargs=None):
        p = sub.add_parser(name, help=help_, parents=[common])
        for o in ops:
            p.add_argument(o)
        if nargs:
            p.add_argument("ops", nargs=nargs, metavar="OP")
        return p

    cmd("mul", "product P*Q", "P", "Q")
    cmd("divide", "right division M = q*L + r", "M", "L")
    cmd("gcrd", "monic greatest common right divisor", "P", "Q")
    cmd("commutator", "[P, Q] = PQ - QP", "P", "Q")
    cmd("dres", "differential resultant of P - lambda, Q - mu", "P", "Q")
    p = cmd("subres", "k-th differential subresultant", "P", "Q")
    p.add_argument("--k", type=int, required=True)
    p = sub.add_parser("curve", help="spectral curve of commuting operators", parents=[common])
    p.add_argument("kind", choices=["planar", "space"])
    p.add_argument("ops", nargs="+", metavar="OP")
    p = cmd("factor", "gcrd of the operators minus spectral variables over the curve", nargs="+")
    p.add_argument("--point", help="comma separated rational coordinates, e.g. 1,1")
    p.add_argument("--param", action="append", metavar="EXPR",
                   help="one rational function of s per spectral variable (repeat the flag)")
    p = sub.add_parser("almost-commuting", help="P_m and the coefficients of [P_m, L] for the generic L",
                       parents=[common])
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p = sub.add_parser("gd", help="stationary Gelfand-Dickey system GD_{n,m}", parents=[common])
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p = cmd("centralizer", "minimal commuting operator per residue class", "L")
    p.add_argument("--max-order", dest="max_order", type=int, default=None)
    cmd("verify-bc", "check that the curve generators annihilate the operators", nargs="+")
    sub.add_parser("examples", help="list built-in operators", parents=[common])
    return ap


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _opt(args, name, default=None):
    return getattr(args, name, default)


def _operator(text: str, args):
    from odo.expr import _examples, load_example, parse_operator
    from odo.field_tower import field_from_spec

    field = _opt(args, "field")
    if text in _examples():
        op = load_example(text)
        if field and field_from_spec(field) != op.parent:
            raise OdoError("FIELD_MISMATCH", f"{text} lives in {_examples()[text]['field']}, not {field}")
        return op
    return parse_operator(text, field or "ratfunc_x")


def _operators(texts, args):
    return [_operator(t, args) for t in texts]


def _rational_point(text: str) -> list[Fraction]:
    try:
        return [Fraction(t.strip()) for t in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise OdoError("BAD_ARGUMENT", f"cannot read {text!r} as rational coordinates") from None


def _op_json(op):
    from odo.expr import operator_to_json
    return operator_to_json(op)


# ---------------------------------------------------------------------------
# commands: each returns (json_result, text_lines)
# ---------------------------------------------------------------------------

def _cmd_mul(args):
    P, Q = _operators([args.P, args.Q], args)
    R = P * Q
    return {"operator": _op_json(R)}, [str(R)]


def _cmd_divide(args):
    from odo.operators import right_divide
    M, L = _operators([args.M, args.L], args)
    q, r = right_divide(M, L)
    return {"quotient": _op_json(q), "remainder": _op_json(r)}, [f"q = {q}", f"r = {r}"]


def _cmd_gcrd(args):
    from odo.operators import gcrd
    P, Q = _operators([args.P, args.Q], args)
    G = gcrd(P, Q)
    return {"operator": _op_json(G)}, [str(G)]


def _cmd_commutator(args):
    from odo.operators import commutator
    P, Q = _operators([args.P, args.Q], args)
    C = commutator(P, Q)
    return {"operator": _op_json(C)}, [str(C)]


def _cmd_dres(args):
    from odo.dres import diff_resultant, to_constants
    P, Q = _operators([args.P, args.Q], args)
    h = diff_resultant(P, Q)
    try:
        h = to_constants(h)
    except OdoError:
        pass
    return {"resultant": str(h), "variables": list(h.ring.names)}, [str(h)]


def _cmd_subres(args):
    from odo.dres import subresultant
    P, Q = _operators([args.P, args.Q], args)
    S = subresultant(P, Q, args.k)
    coeffs = [str(c) for c in S.coeffs]
    lines = [f"phi_{i} = {c}" for i, c in enumerate(coeffs)]
    return {"k": args.k, "order": S.order, "coefficients": coeffs}, lines


def _curve(ops, kind, args):
    from odo.curves import planar_bc, space_bc
    order = _opt(args, "term_order")
    if kind == "planar":
        if len(ops) != 2:
            raise OdoError("ARITY_MISMATCH", "a planar curve needs two operators")
        return planar_bc(*ops, order=order)
    if len(ops) != 3:
        raise OdoError("ARITY_MISMATCH" if len(ops) < 3 else "UNSUPPORTED_GENERATORS",
                       "a space curve needs three operators")
    return space_bc(*ops, order=order)


def _curve_lines(c):
    lines = [f"{g} = 0" for g in c.generators]
    lines.append(f"rank {c.rank}")
    return lines


def _cmd_curve(args):
    ops = _operators(args.ops, args)
    c = _curve(ops, args.kind, args)
    return {"curve": c.to_json()}, _curve_lines(c)


def _cmd_factor(args):
    from odo.curve_factor import global_gcrd, specialize, substitute_parametrization
    ops = _operators(args.ops, args)
    c = _curve(ops, "planar" if len(ops) == 2 else "space", args)
    F = global_gcrd(c, ops)
    out = {"curve": c.to_json(), "global": F.to_json(), "checks": F.checks}
    lines = _curve_lines(c) + [f"F = {F.operator}", "checks: " + ", ".join(f"{k}={v}" for k, v in F.checks.items())]
    if _opt(args, "point"):
        sp = specialize(ops, F, _rational_point(args.point))
        out["point"] = sp.to_json()
        lines.append(f"at {args.point}: {sp.factor}")
    if _opt(args, "param"):
        pf = substitute_parametrization(c, args.param, F)
        out["param"] = pf.to_json()
        if pf.phi_num is not None:
            lines.append(f"phi(s) = ({pf.phi_num})/({pf.phi_den})")
        lines.append(f"along the parametrization: {pf.operator} (verified)")
    return out, lines


def _cmd_almost_commuting(args):
    from odo.formal import almost_commuting, nth_root
    P, H = almost_commuting(args.n, args.m)
    out = {"n": args.n, "m": args.m, "P": str(P), "H": [str(h) for h in H]}
    lines = [f"P_{args.m} = {P}"] + [f"H_{k} = {h}" for k, h in enumerate(H)]
    trunc = _opt(args, "truncation")
    if trunc is not None:
        from odo.formal import DiffPolyRing, psdo_pow
        L = DiffPolyRing(args.n).formal_operator()
        R = nth_root(L, floor=-abs(trunc) - args.m)
        Rm = psdo_pow(R, args.m, -abs(trunc))
        out["power"] = str(Rm)
        lines.append(f"L^({args.m}/{args.n}) = {Rm}")
    return out, lines


def _cmd_gd(args):
    from odo.formal import gd_system
    if args.n < 2 or args.m < 1:
        raise OdoError("BAD_ORDER", "need n >= 2 and m >= 1")
    G = gd_system(args.n, args.m)
    return G.to_json(), G.as_text()


def _cmd_centralizer(args):
    from odo.centralizer import goodearl_basis, rank_of_basis
    L = _operator(args.L, args)
    b = goodearl_basis(L, args.max_order)
    lines = [f"class {i}: {A}" for i, A in sorted(b.elements.items())]
    if len(b.elements) == 1:
        lines.append(f"trivial: only polynomials in L up to order {b.searched_up_to}")
    lines.append(f"rank {rank_of_basis(b)}" + ("" if b.complete else " (search incomplete)"))
    lines += b.notes
    return {"centralizer": b.to_json()}, lines


def _cmd_verify_bc(args):
    from odo.curves import operator_substitute
    ops = _operators(args.ops, args)
    c = _curve(ops, "planar" if len(ops) == 2 else "space", args)
    results = {str(g): not operator_substitute(g, ops) for g in c.generators}
    lines = [f"{'PASS' if ok else 'FAIL'} {g}" for g, ok in results.items()]
    ok = all(results.values())
    if not ok:
        raise OdoError("BC_FAILED", "; ".join(lines))
    return {"curve": c.to_json(), "annihilates": results}, lines


def _cmd_examples(args):
    from odo.expr import _examples
    data = _examples()
    return {"examples": data}, [f"{k} [{v['field']}]: {v['operator']}" for k, v in sorted(data.items())]


COMMANDS = {
    "mul": _cmd_mul, "divide": _cmd_divide, "gcrd": _cmd_gcrd, "commutator": _cmd_commutator,
    "dres": _cmd_dres, "subres": _cmd_subres, "curve": _cmd_curve, "factor": _cmd_factor,
    "almost-commuting": _cmd_almost_commuting, "gd": _cmd_gd, "centralizer": _cmd_centralizer,
    "verify-bc": _cmd_verify_bc, "examples": _cmd_examples,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as e:
        print(f"odo: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return EXIT_OK if not e.code else EXIT_USAGE
    want_json = _opt(args, "json", False)
    try:
        result, lines = COMMANDS[args.command](args)
    except OdoError as e:
        code = EXIT_USAGE if e.code in USAGE_CODES else EXIT_MATH
        if want_json:
            print(json.dumps({"command": args.command, "error": {"code": e.code, "message": e.message}}), file=out)
        print(f"odo: {e}", file=sys.stderr)
        return code
    if want_json:
        print(json.dumps({"command": args.command, "result": result}, indent=2), file=out)
    else:
        for line in lines:
            print(line, file=out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
