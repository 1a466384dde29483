"""Command-line front end.

Every computational subcommand is exact.  Numeric checks (Weil matrices,
Milgram and Gauss sums) only run under ``verify``.

Exit codes: 0 success, 2 mathematical precondition failed, 1 I/O or input
format problem.
"""

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .borcherds import (
    lift_metadata,
    obstruction_check,
    standard_basepoint,
    product_expansion,
    required_truncation,
    weyl_chamber_of,
    weyl_vector,
)
from .characters import FourthRoot, discriminant_form, legendre_chi, signature_table
from .errors import BorcherdsError
from .forms import PrincipalPart, ScalarForm, construct_fm, eisenstein_E_delta
from .quadfield import QFieldElem
from .series import format_series
from .verify import report, run_acceptance
from .weil import VectorForm, lift_scalar_to_vector, project_vector_to_scalar


class InputError(Exception):
    pass


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _forms_from(path):
    data = _read_json(path)
    items = data.get("forms") if isinstance(data, dict) else data
    if not isinstance(items, list):
        raise InputError(f"{path}: expected a list of scalar forms")
    try:
        return [ScalarForm.from_json(x) for x in items]
    except ValueError as exc:
        if isinstance(exc, BorcherdsError):
            raise
        raise InputError(f"{path}: {exc}") from None


def _parse_point(text, p):
    """``"u1,v1;u2,v2"`` (field elements u + v sqrt p) or ``"y1;y2"``."""
    parts = text.split(";")
    if len(parts) != 2:
        raise InputError(f"basepoint {text!r}: expected two coordinates separated by ';'")
    out = []
    for part in parts:
        bits = [b.strip() for b in part.split(",")]
        try:
            if len(bits) == 1:
                out.append(QFieldElem(p, Fraction(bits[0]), 0))
            elif len(bits) == 2:
                out.append(QFieldElem(p, Fraction(bits[0]), Fraction(bits[1])))
            else:
                raise ValueError
        except (ValueError, ZeroDivisionError):
            raise InputError(f"basepoint coordinate {part!r} is not 'u' or 'u,v'") from None
    return tuple(out)


def _parse_elem(text, p):
    return _parse_point(text + ";1", p)[0]


def _emit(args, table_text, payload):
    text = json.dumps(payload, indent=2) + "\n" if args.format == "json" else table_text.rstrip("\n") + "\n"
    if args.output:
        try:
            with open(args.output, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise InputError(f"cannot write {args.output}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


def _form_table(f):
    head = f"p={f.p} weight={f.weight} sign={f.sign} holomorphy={f.holomorphy}"
    return head + "\n" + format_series(f.series)


def _build_fm(args):
    seeds = _forms_from(args.seeds) if args.seeds else None
    return construct_fm(args.p, args.m, args.prec, seeds)


def cmd_fm(args):
    f = _build_fm(args)
    _emit(args, _form_table(f), f.to_json())


def cmd_eisenstein(args):
    prec = args.prec if args.prec is not None else 25
    f = eisenstein_E_delta(args.kappa, args.delta, args.p, prec)
    _emit(args, _form_table(f), f.to_json())


def cmd_lift(args):
    try:
        f = ScalarForm.from_json(_read_json(args.path))
    except ValueError as exc:
        if isinstance(exc, BorcherdsError):
            raise
        raise InputError(str(exc)) from None
    info = discriminant_form(f.p, alpha=args.alpha) if args.alpha is not None else None
    F = lift_scalar_to_vector(f, info)
    lines = [f"p={F.p} alpha={F.info.alpha} epsilon={F.info.epsilon} "
             f"r_mod8={F.info.r_mod8} weight={F.weight}"]
    for g, comp in enumerate(F.components):
        lines.append(f"F_{g} = {format_series(comp)}")
    _emit(args, "\n".join(lines), F.to_json())


def cmd_project(args):
    try:
        F = VectorForm.from_json(_read_json(args.path))
    except ValueError as exc:
        if isinstance(exc, BorcherdsError):
            raise
        raise InputError(str(exc)) from None
    f = project_vector_to_scalar(F)
    _emit(args, _form_table(f), f.to_json())


def _chamber(args, f):
    if args.basepoint:
        point = _parse_point(args.basepoint, args.p)
    else:
        point = standard_basepoint(args.p)
    return weyl_chamber_of(f, point)


def cmd_weyl_vector(args):
    f = _build_fm(args)
    W = _chamber(args, f)
    rho = weyl_vector(f, W).rho
    payload = {"p": args.p, "m": args.m,
               "basepoint": [y.to_json() for y in W.interior_point],
               "whole_space": W.is_whole_space, "rho": rho.to_json()}
    _emit(args, f"rho_W = {rho}\nrho_W' = {rho.conj()}", payload)


def _expansion_table(e, meta):
    lines = [f"p={e.p} rho_W={e.weyl.rho} direction={e.grading_direction} "
             f"bound={e.grading_bound} weight={meta['weight']}",
             "caveats: " + (", ".join(e.caveats) or "none"),
             f"{'pairing':>7}  {'nu':<28} coefficient",
             f"{0:>7}  {'0':<28} {e.leading}"]
    for nu, c in e.sorted_terms():
        lines.append(f"{str(e.pairing(nu)):>7}  {str(nu):<28} {c}")
    return "\n".join(lines)


def cmd_borcherds(args):
    f = _build_fm(args)
    if args.basepoint:
        W = weyl_chamber_of(f, _parse_point(args.basepoint, args.p))
    else:
        # (-eps0', eps0) lies on a wall for some f_m (e.g. m = 5); fall back to (1, 3)
        try:
            W = weyl_chamber_of(f, standard_basepoint(args.p))
        except BorcherdsError:
            W = weyl_chamber_of(f, (1, 3))
    d = _parse_elem(args.direction, args.p) if args.direction else None
    need = required_truncation(f, W, d, args.trace_bound)
    if args.prec is None and f.truncation_order < need:
        args.prec = need
        f = _build_fm(args)
    e = product_expansion(f, W, d, args.trace_bound)
    meta = lift_metadata(f)
    payload = e.to_json()
    payload["header"]["weight"] = str(meta["weight"])
    payload["header"]["divisor"] = [[m, str(c)] for m, c in meta["divisor"]]
    _emit(args, _expansion_table(e, meta), payload)


def cmd_obstructions(args):
    try:
        pp = PrincipalPart.from_json(_read_json(args.pp))
    except ValueError as exc:
        if isinstance(exc, BorcherdsError):
            raise
        raise InputError(str(exc)) from None
    if args.p is not None and pp.p != args.p:
        raise InputError(f"principal part file is for p={pp.p}, not {args.p}")
    basis = _forms_from(args.basis) if args.basis else []
    rep = obstruction_check(pp, basis, weight=args.weight)
    payload = {"ok": rep.ok, "a0": str(rep.a0), "pairings": [str(x) for x in rep.pairings]}
    text = f"ok={rep.ok}\na0={rep.a0}\npairings={[str(x) for x in rep.pairings]}"
    _emit(args, text, payload)


def cmd_signature_table(args):
    rows = signature_table()
    seen = {}
    for pm4, eps, r in rows:
        seen.setdefault((pm4, eps), r)
    lines = ["p mod 4  epsilon  r mod 8"]
    payload = []
    for (pm4, eps), r in sorted(seen.items(), key=lambda kv: (-kv[0][1], kv[0][0])):
        lines.append(f"{pm4:>7}  {eps:>+7d}  {r:>7}")
        payload.append({"p_mod4": pm4, "epsilon": eps, "r_mod8": r})
    _emit(args, "\n".join(lines), payload)


def cmd_gauss_sum(args):
    if args.alpha % args.p == 0:
        raise BorcherdsError("alpha must be a unit modulo p")
    sign = legendre_chi(args.alpha, args.p)
    eps = FourthRoot.for_prime(args.p)
    root = "" if eps is FourthRoot.ONE else "i*"
    text = f"{'-' if sign < 0 else ''}{root}sqrt({args.p})"
    _emit(args, text, {"p": args.p, "alpha": args.alpha % args.p, "sign": sign,
                       "eps_p": eps.value, "closed_form": text})


def cmd_verify(args):
    only = None
    if args.criteria:
        try:
            only = {int(x) for x in args.criteria.split(",")}
        except ValueError:
            raise InputError("--criteria takes a comma separated list of numbers") from None
    results = run_acceptance(only)
    payload = [{"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail,
                "seconds": round(r.seconds, 3)} for r in results]
    _emit(args, report(results), payload)
    return 0 if all(r.passed for r in results) else 1


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"{text!r} is not a rational number") from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="table")
    common.add_argument("--output", help="write to this file instead of stdout")

    ap = argparse.ArgumentParser(prog="prime-borcherds",
                                 description="Exact computations for Borcherds products over Q(sqrt p).")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def fm_args(sp):
        sp.add_argument("--p", type=int, default=5)
        sp.add_argument("--m", type=int, required=True)
        sp.add_argument("--prec", type=_fraction, default=None,
                        help="truncation exponent (default m + 25)")
        sp.add_argument("--seeds", help="JSON list of weight 0 seed forms (needed for p != 5)")

    sp = sub.add_parser("fm", parents=[common], help="the form f_m with principal part q^-m/s(m)")
    fm_args(sp)
    sp.set_defaults(func=cmd_fm)

    sp = sub.add_parser("eisenstein", parents=[common], help="Eisenstein series E in the delta space")
    sp.add_argument("--kappa", type=int, default=2)
    sp.add_argument("--delta", type=int, choices=(1, -1), default=1)
    sp.add_argument("--p", type=int, default=5)
    sp.add_argument("--prec", type=_fraction, default=None)
    sp.set_defaults(func=cmd_eisenstein)

    sp = sub.add_parser("lift", parents=[common], help="scalar form file -> vector valued form")
    sp.add_argument("path")
    sp.add_argument("--alpha", type=int, default=None)
    sp.set_defaults(func=cmd_lift)

    sp = sub.add_parser("project", parents=[common], help="vector valued form file -> scalar form")
    sp.add_argument("path")
    sp.set_defaults(func=cmd_project)

    sp = sub.add_parser("weyl-vector", parents=[common], help="Weyl vector of the chamber of f_m")
    fm_args(sp)
    sp.add_argument("--basepoint", help="'u1,v1;u2,v2' (default (-eps0', eps0))")
    sp.set_defaults(func=cmd_weyl_vector)

    sp = sub.add_parser("borcherds", parents=[common], help="product expansion of the lift of f_m")
    fm_args(sp)
    sp.add_argument("--trace-bound", type=int, default=10)
    sp.add_argument("--basepoint", help="'u1,v1;u2,v2'")
    sp.add_argument("--direction", help="grading direction 'u,v' (totally positive, inside W)")
    sp.set_defaults(func=cmd_borcherds)

    sp = sub.add_parser("obstructions", parents=[common], help="pair a principal part with cusp forms")
    sp.add_argument("--p", type=int, default=None)
    sp.add_argument("--pp", required=True, help="principal part JSON")
    sp.add_argument("--basis", help="JSON list of cusp forms of the dual weight")
    sp.add_argument("--weight", type=int, default=0)
    sp.set_defaults(func=cmd_obstructions)

    sp = sub.add_parser("signature-table", parents=[common], help="r mod 8 from Milgram's formula")
    sp.set_defaults(func=cmd_signature_table)

    sp = sub.add_parser("gauss-sum", parents=[common], help="closed form of sum e(alpha x^2/p)")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--alpha", type=int, default=1)
    sp.set_defaults(func=cmd_gauss_sum)

    sp = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    sp.add_argument("--criteria", help="comma separated subset, e.g. 1,5,9")
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        rc = args.func(args)
    except BorcherdsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        # thread cap and other environment problems
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
