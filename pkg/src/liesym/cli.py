"""Command-line front end.

Reads a problem file, runs one analysis, and prints a JSON report with a
top-level ``command`` / ``inputs`` / ``result`` triple (``--plain`` switches
to human-readable text).  Exit status: 0 on success, 1 when a check fails,
2 on input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import buckpi, claws, detsys, invariants, varcalc
from .errors import LiesymError, NotASymmetry, ParseError
from .expr import Context, Expr, Jet, Var
from .jet import (
    VectorField,
    characteristic_of,
    lie_bracket,
    prolong,
)
from .parse import (
    Problem,
    format_expr,
    parse_dimension_csv,
    parse_expr,
    parse_problem,
)
from .varcalc import ConservedCurrent, Lagrangian


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="liesym",
        description="Lie symmetry analysis of differential equations",
    )
    ap.add_argument("--plain", action="store_true",
                    help="human-readable output instead of JSON")
    ap.add_argument("--seed", type=int, default=None,
                    help="accepted for reproducibility of dev harnesses; unused")
    sub = ap.add_subparsers(dest="command", required=True)

    def cmd(name, **file_kw):
        c = sub.add_parser(name)
        c.add_argument("--file", required=file_kw.get("file", True),
                       help="problem file")
        return c

    c = cmd("prolong")
    c.add_argument("--vf", required=True)
    c.add_argument("--order", type=int, required=True)

    c = cmd("determine")
    c.add_argument("--system", required=True)
    c.add_argument("--xi-names", default=None,
                   help="comma-separated names for the xi coefficients")
    c.add_argument("--phi-names", default=None)
    c.add_argument("--order-cap", type=int, default=None)

    c = cmd("solve")
    c.add_argument("--system", required=True)
    c.add_argument("--degree", type=int, default=3)
    c.add_argument("--xi-names", default=None)
    c.add_argument("--phi-names", default=None)
    c.add_argument("--order-cap", type=int, default=None)

    c = cmd("check-symmetry")
    c.add_argument("--vf", required=True)
    c.add_argument("--system", required=True)
    c.add_argument("--order-cap", type=int, default=None)

    c = cmd("bracket")
    c.add_argument("--vf", required=True)
    c.add_argument("--vf2", required=True)

    c = cmd("euler-lagrange")
    c.add_argument("--lagrangian", required=True)

    c = cmd("varsym-defect")
    c.add_argument("--vf", required=True)
    c.add_argument("--lagrangian", required=True)

    c = cmd("noether")
    c.add_argument("--vf", required=True)
    c.add_argument("--lagrangian", required=True)
    c.add_argument("--b", default=None,
                   help="name of a current item supplying the divergence tuple B")

    c = cmd("check-claw")
    c.add_argument("--current", required=True)
    c.add_argument("--system", required=True)
    c.add_argument("--order-cap", type=int, default=None)

    c = cmd("check-char-form")
    c.add_argument("--current", required=True)
    c.add_argument("--char", required=True,
                   help="name of a current item supplying the characteristic tuple")
    c.add_argument("--system", required=True)

    c = cmd("null-div")
    c.add_argument("--current", required=True)

    c = cmd("check-invariant")
    c.add_argument("--vf", required=True)
    c.add_argument("--expr", required=True, help="candidate invariant")
    c.add_argument("--order", type=int, default=None)

    c = cmd("next-invariant")
    c.add_argument("--eta", required=True)
    c.add_argument("--zeta", required=True)

    c = cmd("char-system")
    c.add_argument("--vf", required=True)

    c = sub.add_parser("pi")
    c.add_argument("--file", default=None)
    c.add_argument("--dimmatrix", default=None,
                   help="name of a dimmatrix item in the problem file")
    c.add_argument("--csv", default=None, help="dimension table as CSV")

    c = cmd("rank-probe")
    c.add_argument("--system", required=True)
    c.add_argument("--sample", action="append", required=True,
                   help="comma-separated assignments, e.g. 'x=1,u_xx=0'")

    return ap


def _load(path: str) -> Problem:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())


def _pick(table: dict, name: str, what: str):
    try:
        return table[name]
    except KeyError:
        raise LiesymError(f"no {what} named {name!r} in the problem file") from None


def _vf_json(v: VectorField) -> dict:
    ctx = v.ctx
    return {
        "xi": {ctx.indep[i]: format_expr(v.xi[i], ctx) for i in range(ctx.p)},
        "phi": {ctx.dep[a]: format_expr(v.phi[a], ctx) for a in range(ctx.q)},
    }


def _frac(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise LiesymError(f"bad rational {s!r}: {exc}") from None


def _parse_sample(text: str, ctx: Context) -> dict[Expr, Fraction]:
    out: dict[Expr, Fraction] = {}
    for piece in text.split(","):
        if "=" not in piece:
            raise LiesymError(f"sample entry {piece!r} is not name=value")
        name, val = piece.split("=", 1)
        atom = parse_expr(name.strip(), ctx)
        if not isinstance(atom, (Var, Jet)):
            raise LiesymError(f"sample key {name.strip()!r} is not a variable")
        out[atom] = _frac(val.strip())
    return out


def _run(args: argparse.Namespace) -> tuple[dict, int]:
    """Returns (report, exit status)."""
    cmd = args.command
    inputs = {
        k: v for k, v in sorted(vars(args).items())
        if k not in ("command", "plain", "seed") and v is not None
    }
    prob = _load(args.file) if getattr(args, "file", None) else None
    ctx = prob.ctx if prob else None

    if cmd == "prolong":
        v = _pick(prob.vfields, args.vf, "vector field")
        pv = prolong(v, args.order)
        coeffs = {
            format_expr(j, ctx): format_expr(pv.coeffs[j], ctx)
            for j in sorted(pv.coeffs, key=lambda j: (j.dep, len(j.idx), j.idx))
        }
        return {"command": cmd, "inputs": inputs,
                "result": {**_vf_json(v), "coeffs": coeffs}}, 0

    if cmd in ("determine", "solve"):
        sys_ = _pick(prob.systems, args.system, "system")
        xi_names = args.xi_names.split(",") if args.xi_names else None
        phi_names = args.phi_names.split(",") if args.phi_names else None
        ds = detsys.determining_equations(sys_, xi_names, phi_names,
                                          args.order_cap)
        if cmd == "determine":
            ectx = ds.ctx
            return {"command": cmd, "inputs": inputs, "result": {
                "equations": [format_expr(e, ectx) for e in ds.equations],
                "splitting_vars": [format_expr(j, ectx)
                                   for j in ds.splitting_vars],
            }}, 0
        basis = detsys.solve_determining(ds, detsys.Ansatz(args.degree))
        return {"command": cmd, "inputs": inputs, "result": {
            "dimension": len(basis),
            "fields": [_vf_json(v) for v in basis],
        }}, 0

    if cmd == "check-symmetry":
        v = _pick(prob.vfields, args.vf, "vector field")
        sys_ = _pick(prob.systems, args.system, "system")
        ok = detsys.check_symmetry(v, sys_, args.order_cap)
        return {"command": cmd, "inputs": inputs,
                "result": {"symmetry": ok}}, 0 if ok else 1

    if cmd == "bracket":
        v = _pick(prob.vfields, args.vf, "vector field")
        w = _pick(prob.vfields, args.vf2, "vector field")
        return {"command": cmd, "inputs": inputs,
                "result": _vf_json(lie_bracket(v, w))}, 0

    if cmd == "euler-lagrange":
        lag = Lagrangian(ctx, _pick(prob.lagrangians, args.lagrangian,
                                    "lagrangian"))
        eqs = varcalc.euler_lagrange(lag)
        return {"command": cmd, "inputs": inputs, "result": {
            "equations": {ctx.dep[a]: format_expr(e, ctx)
                          for a, e in enumerate(eqs)},
        }}, 0

    if cmd == "varsym-defect":
        v = _pick(prob.vfields, args.vf, "vector field")
        lag = Lagrangian(ctx, _pick(prob.lagrangians, args.lagrangian,
                                    "lagrangian"))
        d = varcalc.variational_symmetry_defect(v, lag)
        from .expr import is_zero
        return {"command": cmd, "inputs": inputs, "result": {
            "defect": format_expr(d, ctx), "zero": is_zero(d)}}, 0

    if cmd == "noether":
        v = _pick(prob.vfields, args.vf, "vector field")
        lag = Lagrangian(ctx, _pick(prob.lagrangians, args.lagrangian,
                                    "lagrangian"))
        b = _pick(prob.currents, args.b, "current") if args.b else None
        try:
            cur = varcalc.noether_current_first_order(v, lag, b)
        except NotASymmetry as exc:
            return {"command": cmd, "inputs": inputs,
                    "result": {"error": str(exc)}}, 1
        return {"command": cmd, "inputs": inputs, "result": {
            "current": [format_expr(e, ctx) for e in cur.f]}}, 0

    if cmd == "check-claw":
        cur = ConservedCurrent(ctx, _pick(prob.currents, args.current,
                                          "current"))
        sys_ = _pick(prob.systems, args.system, "system")
        ok = claws.is_conservation_law(cur, sys_, args.order_cap)
        return {"command": cmd, "inputs": inputs,
                "result": {"conservation_law": ok}}, 0 if ok else 1

    if cmd == "check-char-form":
        cur = ConservedCurrent(ctx, _pick(prob.currents, args.current,
                                          "current"))
        q = _pick(prob.currents, args.char, "current")
        sys_ = _pick(prob.systems, args.system, "system")
        ok = claws.verify_characteristic_form(cur, q, sys_)
        return {"command": cmd, "inputs": inputs,
                "result": {"characteristic_form": ok}}, 0 if ok else 1

    if cmd == "null-div":
        cur = ConservedCurrent(ctx, _pick(prob.currents, args.current,
                                          "current"))
        ok = claws.is_null_divergence(cur)
        return {"command": cmd, "inputs": inputs,
                "result": {"null_divergence": ok}}, 0 if ok else 1

    if cmd == "check-invariant":
        v = _pick(prob.vfields, args.vf, "vector field")
        eta = parse_expr(args.expr, ctx)
        from .expr import jet_order
        n = args.order if args.order is not None else jet_order(eta)
        ok = invariants.differential_invariant_check(v, n, eta)
        return {"command": cmd, "inputs": inputs,
                "result": {"invariant": ok, "order": n}}, 0 if ok else 1

    if cmd == "next-invariant":
        eta = parse_expr(args.eta, ctx)
        zeta = parse_expr(args.zeta, ctx)
        out = invariants.next_invariant(eta, zeta)
        return {"command": cmd, "inputs": inputs,
                "result": {"invariant": format_expr(out, ctx)}}, 0

    if cmd == "char-system":
        v = _pick(prob.vfields, args.vf, "vector field")
        return {"command": cmd, "inputs": inputs,
                "result": {"system": invariants.characteristic_system(v)}}, 0

    if cmd == "pi":
        if args.csv:
            with open(args.csv, encoding="utf-8") as fh:
                model = parse_dimension_csv(fh.read())
        elif args.dimmatrix and prob:
            model = _pick(prob.dim_models, args.dimmatrix, "dimension matrix")
        else:
            raise LiesymError("pi needs --csv or --file with --dimmatrix")
        basis = buckpi.pi_basis(model)
        kernel = [[str(basis.b[j, k]) for j in range(basis.b.rows)]
                  for k in range(basis.b.cols)]
        return {"command": cmd, "inputs": inputs, "result": {
            "rank": basis.s,
            "kernel": kernel,
            "pi": buckpi.power_products(basis, model.derived_names),
        }}, 0

    if cmd == "rank-probe":
        sys_ = _pick(prob.systems, args.system, "system")
        samples = [_parse_sample(s, ctx) for s in args.sample]
        ok = detsys.rank_probe(sys_, samples)
        return {"command": cmd, "inputs": inputs,
                "result": {"maximal_rank": ok}}, 0 if ok else 1

    raise LiesymError(f"unhandled command {cmd!r}")


def _emit_plain(report: dict, out) -> None:
    def walk(val, indent=""):
        if isinstance(val, dict):
            for k, v in val.items():
                if isinstance(v, (dict, list)):
                    print(f"{indent}{k}:", file=out)
                    walk(v, indent + "  ")
                else:
                    print(f"{indent}{k}: {v}", file=out)
        elif isinstance(val, list):
            for v in val:
                if isinstance(v, (dict, list)):
                    walk(v, indent + "  ")
                else:
                    print(f"{indent}- {v}", file=out)

    print(f"command: {report['command']}", file=out)
    walk(report["result"])


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        report, status = _run(args)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LiesymError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.plain:
        _emit_plain(report, sys.stdout)
    else:
        json.dump(report, sys.stdout, indent=2)
        print()
    return status


if __name__ == "__main__":
    sys.exit(main())
