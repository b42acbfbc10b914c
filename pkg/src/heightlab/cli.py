"""heightlab command line.

Every subcommand prints one report (JSON by default, ``--text`` for a short
human form).  Exit codes: 0 success, 1 domain error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from . import arakelov as ak
from . import arch_pairing as ap
from . import klm_regulator as klm
from . import neron_tate as nt
from . import spreads
from .errors import HeightLabError, VerificationFailed
from .funcfield import Place, parse_rational_function, tame_symbol, weil_factors

SCHEMA = 1


class UsageError(Exception):
    pass


def global_tol() -> float:
    raw = os.environ.get("HEIGHTLAB_TOL")
    if raw is None:
        return klm.DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"HEIGHTLAB_TOL={raw!r} is not a number") from None
    if not (0 < tol < 1):
        raise UsageError("HEIGHTLAB_TOL must lie in (0, 1)")
    return tol


def _frac(text) -> Fraction:
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def _json_arg(text, what):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what}: invalid JSON ({exc.msg})") from None


def _load_input(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg})") from None


def _ratio(x: Fraction) -> str:
    return str(x)


# ---- funcfield ---------------------------------------------------------

def cmd_tame(args):
    f = parse_rational_function(args.f)
    g = parse_rational_function(args.g)
    place = Place.parse(args.at)
    value = tame_symbol(f, g, place)
    return ({"f": str(f), "g": str(g), "place": str(place)},
            {"value": str(value), "norm": _ratio(value.norm())})


def cmd_weil(args):
    f = parse_rational_function(args.f)
    g = parse_rational_function(args.g)
    factors = weil_factors(f, g)
    prod = Fraction(1)
    for _, v in factors:
        prod *= v
    return ({"f": str(f), "g": str(g)},
            {"product": _ratio(prod),
             "factors": [{"place": str(p), "norm": _ratio(v)} for p, v in factors]})


# ---- m = 0 pairing ------------------------------------------------------

def _example_m0():
    xi1 = ap.Precycle0([ap.Term(parse_rational_function("t"), ap.P1)])
    xi2 = ap.ZeroCycle([(Place.rational(2), 1), (Place.rational(3), -1)])
    return xi1, xi2


def _exactlog_json(x: ap.ExactLog):
    return {"ratio": _ratio(x.ratio), "value": x.value,
            "factors": [{"term": t, "point": q, "mult": m, "abs_norm": _ratio(v)}
                        for t, q, m, v in x.factors]}


def cmd_pair0(args):
    if args.example:
        xi1, xi2 = _example_m0()
    elif args.input:
        data = _load_input(args.input)
        xi1, xi2 = ap.Precycle0.from_json(data["xi1"]), ap.ZeroCycle.from_json(data["xi2"])
    else:
        raise UsageError("pair0 needs --input FILE or --example paper")
    result = ap.pair_m0(xi1, xi2)
    return ({"xi1": xi1.to_json(), "xi2": xi2.to_json()},
            {"boundary_xi1": ap.boundary(xi1).to_json(), "pairing": _exactlog_json(result)})


def cmd_recip0(args):
    if args.example:
        xi1 = ap.Precycle0([ap.Term(parse_rational_function("t"), ap.P1)])
        xi2 = ap.Precycle0([ap.Term(parse_rational_function("(t-2)/(t-3)"), ap.P1)])
    elif args.input:
        data = _load_input(args.input)
        xi1, xi2 = ap.Precycle0.from_json(data["xi1"]), ap.Precycle0.from_json(data["xi2"])
    else:
        raise UsageError("recip0 needs --input FILE or --example paper")
    lhs, rhs = ap.reciprocity_check(xi1, xi2)
    return ({"xi1": xi1.to_json(), "xi2": xi2.to_json()},
            {"xi1_on_div_xi2": _exactlog_json(lhs), "xi2_on_div_xi1": _exactlog_json(rhs),
             "equal": lhs.ratio == rhs.ratio})


# ---- m = 1 pairing ------------------------------------------------------

def _parse_p(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError("--p expects two rationals 'x,y'")
    return _frac(parts[0]), _frac(parts[1])


def _m1_inputs(args):
    if args.example:
        p = _parse_p(args.p)
        return klm.triangle_precycle(), klm.triangle_symbol_pair(_frac(args.f1), p)
    if args.input:
        data = _load_input(args.input)
        return klm.K1Precycle.from_json(data["xi1"]), klm.SymbolPair.from_json(data["symbol"])
    raise UsageError("needs --input FILE or --example paper")


def _tols(args):
    tol = args.tol if args.tol is not None else global_tol()
    if not (0 < tol < 1):
        raise UsageError("--tol must lie in (0, 1)")
    if not (0 < args.guard < 1):
        raise UsageError("--guard must lie in (0, 1)")
    return tol, args.guard


def cmd_pair1(args):
    xi1, sp = _m1_inputs(args)
    tol, guard = _tols(args)
    parts = klm.pair_m1_breakdown(xi1, sp, args.orientation, tol, guard)
    value = math.fsum(p["contribution"] for p in parts)
    return ({"xi1": xi1.to_json(), "symbol": sp.to_json(), "orientation": args.orientation,
             "tol": tol, "guard": guard},
            {"value": value, "tame_symbol_cycle": klm.tame_symbol_cycle(sp).to_json(),
             "arcs": parts})


def cmd_winding(args):
    xi1, sp = _m1_inputs(args)
    tol, guard = _tols(args)
    gamma = klm.build_gamma(xi1)
    n = klm.winding_number(sp.f2, gamma, args.orientation, tol, guard)
    return ({"xi1": xi1.to_json(), "f": sp.f2.to_json(), "orientation": args.orientation},
            {"winding": n, "signed_area": str(klm.orient(gamma, args.orientation).signed_area())})


# ---- Neron-Tate ------------------------------------------------------------

def _curve(text):
    coeffs = _json_arg(text, "--curve")
    if not isinstance(coeffs, list) or not all(isinstance(c, int) for c in coeffs):
        raise UsageError("--curve expects a JSON list of integers")
    return nt.EllipticCurveQ.from_list(coeffs)


def _point(E, text, what):
    xy = _json_arg(text, what)
    if xy is None or xy == "O":
        return nt.ECPoint.zero()
    if not isinstance(xy, list) or len(xy) != 2:
        raise UsageError(f"{what} expects [x, y] or null")
    return E.point(_frac(xy[0]), _frac(xy[1]))


def _nt_tol(args):
    tol = args.tol if args.tol is not None else max(global_tol(), nt.MIN_TOL)
    if tol < nt.MIN_TOL:
        raise UsageError(f"--tol must be at least {nt.MIN_TOL:g}")
    return tol


def _nt_kw(args):
    kw = {"max_doublings": args.max_doublings}
    if args.doublings is not None:
        kw["doublings"] = args.doublings
    return kw


def cmd_ntheight(args):
    E = _curve(args.curve)
    P = _point(E, args.point, "--point")
    tol = _nt_tol(args)
    h = nt.canonical_height(E, P, tol, **_nt_kw(args))
    n = args.doublings if args.doublings is not None else nt.doublings_needed(E, tol)
    return ({"curve": E.ainvs, "point": P.to_json(), "tol": tol},
            {"canonical_height": h, "naive_height": nt.naive_height(P), "doublings": n,
             "height_bound": nt.height_difference_bound(E), "torsion_order": nt.torsion_order(E, P)})


def cmd_ntpair(args):
    E = _curve(args.curve)
    P, Q = _point(E, args.P, "--P"), _point(E, args.Q, "--Q")
    tol = _nt_tol(args)
    return ({"curve": E.ainvs, "P": P.to_json(), "Q": Q.to_json(), "tol": tol},
            {"pairing": nt.nt_pairing(E, P, Q, tol, **_nt_kw(args))})


def cmd_ex5(args):
    E = _curve(args.curve)
    pts = [_point(E, getattr(args, k), f"--{k}") for k in ("p1", "q1", "p2", "q2")]
    genera = _json_arg(args.genera, "--genera")
    if not isinstance(genera, list) or not all(isinstance(g, int) and g >= 0 for g in genera):
        raise UsageError("--genera expects a JSON list of nonnegative integers")
    tol = _nt_tol(args)
    factors = [nt.delta11_self_intersection(g) for g in genera]
    value = nt.graded_height_ex5(E, *pts, genera, tol, **_nt_kw(args))
    return ({"curve": E.ainvs, "points": [p.to_json() for p in pts], "genera": genera, "tol": tol},
            {"delta11_factors": factors, "value": value})


# ---- Arakelov -------------------------------------------------------------

def cmd_arakelov(args):
    k = ak.QuadraticField(args.d)
    parts = args.alpha.split(",")
    if len(parts) not in (1, 2):
        raise UsageError("--alpha expects 'a' or 'a,b'")
    a = _frac(parts[0])
    b = _frac(parts[1]) if len(parts) == 2 else Fraction(0)
    alpha = k.element(a, b)
    D = ak.principal_divisor(alpha)
    report = ak.divisor_report(D)
    return ({"field": str(k), "d": k.d, "alpha": [str(a), str(b)]},
            {"norm": str(alpha.norm), **report})


# ---- spreads ---------------------------------------------------------------

def cmd_spread(args):
    eliminate = args.eliminate_pi
    if args.example == "ex000":
        exprs = [spreads.EX000]
    elif args.example == "ec":
        exprs = [spreads.EC_CUBIC, spreads.EC_CYCLE]
        eliminate = True
    elif args.expr:
        exprs = args.expr
    else:
        raise UsageError("spread needs --expr TEXT or --example ex000|ec")
    sp = spreads.spread(exprs if len(exprs) > 1 else exprs[0], over_z=args.over_z,
                        eliminate_pi=eliminate)
    report = None if args.no_verify else spreads.verify_spread(sp)
    out = sp.to_json()
    out["text"] = sp.to_text()
    if report is not None:
        out["verification"] = report
    return ({"expr": exprs, "over_z": args.over_z, "eliminate_pi": eliminate}, out)


# ---- plumbing --------------------------------------------------------------

def _add_output(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="text", action="store_false", help="JSON report (default)")
    g.add_argument("--text", dest="text", action="store_true", help="short text report")
    p.set_defaults(text=False)


def _add_m1(p):
    p.add_argument("--example", choices=["paper"])
    p.add_argument("--input", help="JSON file with xi1 and symbol")
    p.add_argument("--f1", default="2", help="constant f1 for --example paper")
    p.add_argument("--p", default="3/10,3/10", help="centre p of f2 = w - p for --example paper")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--guard", type=float, default=klm.DEFAULT_GUARD)
    p.add_argument("--orientation", choices=["ccw", "cw", "native"], default="ccw")


def _add_nt(p):
    p.add_argument("--curve", required=True, help="[a1,a2,a3,a4,a6] or [a4,a6]")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--doublings", type=int, default=None)
    p.add_argument("--max-doublings", type=int, default=nt.MAX_DOUBLINGS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heightlab", description="Height pairing toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tame", help="tame symbol of f, g at a place of P^1")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--at", required=True, help="place: monic polynomial in t, or inf")
    p.set_defaults(func=cmd_tame)

    p = sub.add_parser("weil", help="Weil reciprocity product of f, g")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.set_defaults(func=cmd_weil)

    for name, func in (("pair0", cmd_pair0), ("recip0", cmd_recip0)):
        p = sub.add_parser(name, help="m = 0 pairing" if name == "pair0" else "m = 0 reciprocity")
        p.add_argument("--input")
        p.add_argument("--example", choices=["paper"])
        p.set_defaults(func=func)

    p = sub.add_parser("pair1", help="real m = 1 pairing on lines in P^2")
    _add_m1(p)
    p.set_defaults(func=cmd_pair1)

    p = sub.add_parser("winding", help="winding number of f2 along the contour")
    _add_m1(p)
    p.set_defaults(func=cmd_winding)

    p = sub.add_parser("ntheight", help="canonical height")
    _add_nt(p)
    p.add_argument("--point", required=True)
    p.set_defaults(func=cmd_ntheight)

    p = sub.add_parser("ntpair", help="Neron-Tate pairing")
    _add_nt(p)
    p.add_argument("--P", required=True)
    p.add_argument("--Q", required=True)
    p.set_defaults(func=cmd_ntpair)

    p = sub.add_parser("ex5", help="graded height pairing on a product of curves")
    _add_nt(p)
    for k in ("p1", "q1", "p2", "q2"):
        p.add_argument(f"--{k}", required=True)
    p.add_argument("--genera", default="[1]", help="JSON list of genera g_2..g_nu")
    p.set_defaults(func=cmd_ex5)

    p = sub.add_parser("arakelov", help="principal Arakelov divisor and its degree")
    p.add_argument("--d", type=int, required=True, help="squarefree d, or 1 for Q")
    p.add_argument("--alpha", required=True, help="a,b for a + b*w")
    p.set_defaults(func=cmd_arakelov)

    p = sub.add_parser("spread", help="spread constants to a presentation over Q")
    p.add_argument("--expr", action="append", help="polynomial text; repeat for a system")
    p.add_argument("--example", choices=["ex000", "ec"])
    p.add_argument("--over-z", action="store_true")
    p.add_argument("--eliminate-pi", action="store_true")
    p.add_argument("--no-verify", action="store_true")
    p.set_defaults(func=cmd_spread)

    for action in sub.choices.values():
        _add_output(action)
    return parser


def _text(result, indent=""):
    lines = []
    for key, value in result.items():
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines += _text(value, indent + "  ")
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{indent}{key}:")
            for item in value:
                lines.append(indent + "  - " + ", ".join(f"{k}={v}" for k, v in item.items()))
        else:
            lines.append(f"{indent}{key}: {value}")
    return lines


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        inputs, result = args.func(args)
    except (UsageError, ValueError, KeyError, TypeError) as exc:
        # malformed or out-of-contract input
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"heightlab {args.command}: error: {msg}", file=err)
        return 2
    except HeightLabError as exc:
        name = type(exc).__name__
        msg = str(exc).splitlines()[0] if str(exc) else name
        if args.text:
            print(f"{name}: {msg}", file=err)
        else:
            payload = {"schema": SCHEMA, "command": args.command, "status": "error",
                       "error": {"type": name, "message": msg}}
            if isinstance(exc, VerificationFailed) and exc.report is not None:
                payload["error"]["report"] = exc.report
            print(json.dumps(payload, indent=2), file=out)
            print(f"{name}: {msg}", file=err)
        return 1
    if args.text:
        print("\n".join(_text(result)), file=out)
    else:
        report = {"schema": SCHEMA, "command": args.command, "status": "ok",
                  "input": inputs, "result": result}
        print(json.dumps(report, indent=2), file=out)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
