"""Command line front end.

Every subcommand prints one document to stdout, either as ``key: value``
text or as JSON (``--json``). Errors are reported as
``{"error": <class>, "message": ...}`` and mapped to exit codes
1 (input), 2 (computation) and 3 (numeric tolerance).
"""

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .errors import DimensionMismatch, InputError, QcohError
from .exact.lp import cone_member
from .exact.numeric import context, default_prec, to_json
from .exact.rational import to_str

SCHEMA = """\
input file (*.toric.json):
  {"rank": r, "divisors": [[int x r] x m], "eta": ["p/q" x r],
   "name": "optional", "nef_basis": [[int x r] x r] (optional)}
rationals are strings "p/q"; floats are rejected.
bundles: "a1,...,ar" (a line bundle L_xi) or ';'-separated terms "k*a1,...,ar".
"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n\n{SCHEMA}")
        raise SystemExit(1)


def _plain(obj, ctx):
    """JSON-ready copy: Fractions become "p/q", mp numbers decimal pairs."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return to_str(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v, ctx) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v, ctx) for v in obj]
    if isinstance(obj, float):
        raise TypeError("floats are not emitted")
    return to_json(ctx, obj)


def _text(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_inline(v)}")
    else:
        lines.append(f"{pad}{_inline(obj)}")
    return lines


def _flat(v):
    if isinstance(v, dict) and set(v) == {"re", "im", "prec"}:
        return True
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) or _flat(x) for x in v)
    return False


def _inline(v):
    if isinstance(v, dict) and set(v) == {"re", "im", "prec"}:
        return f"{v['re']} + {v['im']}i"
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    return json.dumps(v) if not isinstance(v, str) else v


def _vector(text, r=None, what="vector"):
    try:
        out = [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad {what} {text!r}: {exc}") from exc
    if r is not None and len(out) != r:
        raise DimensionMismatch(f"{what} needs {r} coordinates, got {len(out)}")
    return out


def _integral(vec, what):
    if any(x.denominator != 1 for x in vec):
        raise InputError(f"{what} must be integral")
    return tuple(int(x) for x in vec)


def _orbifold(path):
    from .toric import ToricOrbifold

    return ToricOrbifold(path)


# ---------------------------------------------------------------------------
# subcommands

def cmd_validate(args, ctx):
    from .toric import summary

    return summary(_orbifold(args.file))


def cmd_box(args, ctx):
    X = _orbifold(args.file)
    from .cohomology import sector_ring

    rows = []
    for s in X.sectors:
        rows.append({
            "index": s.index,
            "d": list(s.d),
            "v": list(s.v),
            "age": s.age,
            "fixing": sorted(s.fixing),
            "n_v": s.n_v,
            "inv": s.inv,
            "dim_H": sector_ring(X, s.index).dim,
        })
    total, expected = sum(r["dim_H"] for r in rows), X.volume_check()
    return {"sectors": rows, "dim_H_orb": total, "volume_count": expected}


def cmd_cone(args, ctx):
    x = _vector(args.x, what="point")
    gens = [_vector(g, len(x), "generator") for g in args.gens.split(";") if g.strip()]
    if args.file:
        X = _orbifold(args.file)
        idx = [int(t) for t in args.subset.split(",")] if args.subset else range(X.data.m)
        gens += [list(X.data.D[i]) for i in idx]
    return {"x": x, "mode": args.mode, "member": cone_member(x, gens, args.mode)}


def cmd_weakfano(args, ctx):
    from .toric import weak_fano_check

    X = _orbifold(args.file)
    rep = weak_fano_check(X.fan, X.frame)
    rep["rho_hat"] = list(X.frame.rho_hat)
    return rep


def cmd_keff(args, ctx):
    from .toric import keff_enumerate

    X = _orbifold(args.file)
    found = keff_enumerate(X.fan, X.frame, Fraction(args.bound), X.sectors)
    return {"bound": Fraction(args.bound), "classes": [
        {"d": list(d), "sector": s.index, "q": [sum(Fraction(p_) * x for p_, x in zip(p, d)) for p in X.frame.p]}
        for d, s in found
    ]}


def cmd_integrate(args, ctx):
    from .cohomology import integrate, parse_class, sector_ring

    X = _orbifold(args.file)
    if not 0 <= args.sector < len(X.sectors):
        raise InputError(f"sector must be in 0..{len(X.sectors) - 1}")
    ring = sector_ring(X, args.sector)
    vec = parse_class(ring, args.cls)
    return {"sector": args.sector, "class": args.cls, "integral": integrate(X, args.sector, vec, seed=args.seed)}


def _bundle(X, text):
    from .charclasses import parse_bundle

    try:
        return parse_bundle(X, text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad bundle {text!r}: {exc}") from exc


def cmd_chi(args, ctx):
    from .charclasses import VSpace, chi_rr, psi

    X = _orbifold(args.file)
    V1 = _bundle(X, args.bundles)
    V2 = _bundle(X, args.against) if args.against else None
    k, res = chi_rr(X, V1, V2, args.prec)
    out = {"chi": k, "integrality_residual": res}
    if args.check_mukai:
        from .charclasses import KClass

        W = VSpace(X, args.prec)
        lhs = W.pairing(psi(X, V1, args.prec), psi(X, V2 or KClass.structure_sheaf(X), args.prec))
        out["mukai_pairing"] = lhs
        out["mukai_residual"] = abs(lhs - k)
    return out


def cmd_psi(args, ctx):
    from .charclasses import psi

    X = _orbifold(args.file)
    cls = psi(X, _bundle(X, args.bundle), args.prec)
    return {"psi": _numeric_class(X, cls, ctx)}


def _numeric_class(X, cls, ctx):
    from .cohomology import sector_ring

    out = []
    for v in sorted(cls.parts):
        ring = sector_ring(X, v)
        coeffs = {}
        for i, c in enumerate(cls.parts[v]):
            if c:
                coeffs[_monomial(ring.basis[i])] = c
        out.append({"sector": v, "coeffs": coeffs})
    return out


def _monomial(expo):
    terms = [f"p{a + 1}" + (f"^{e}" if e > 1 else "") for a, e in enumerate(expo) if e]
    return "*".join(terms) or "1"


def cmd_galois(args, ctx):
    from .charclasses import galois_residual

    X = _orbifold(args.file)
    xi = _integral(_vector(args.xi, X.r, "xi"), "xi")
    res = galois_residual(X, _bundle(X, args.bundle), xi, args.prec)
    return {"xi": list(xi), "residual": res, "ok": res < 2 ** (-(ctx.prec // 2))}


def cmd_ifunction(args, ctx):
    from .mirror import i_function

    X = _orbifold(args.file)
    return {"terms": i_function(X, Fraction(args.q_order)).to_json()}


def cmd_mirrormap(args, ctx):
    from .mirror import mirror_map

    X = _orbifold(args.file)
    return mirror_map(X, Fraction(args.q_order)).to_json()


def cmd_monodromy(args, ctx):
    from .mirror import galois_monodromy_check, i_function

    X = _orbifold(args.file)
    xi = _integral(_vector(args.xi, X.r, "xi"), "xi")
    series = i_function(X, Fraction(args.q_order))
    ok, d = galois_monodromy_check(X, xi, args.q_order, series)
    return {"xi": list(xi), "ok": ok, "first_failure": list(d) if d else None, "terms": len(series.terms)}


def cmd_oscint(args, ctx):
    from .mirror import bessel_oracle, oscillatory_check_1d

    X = _orbifold(args.file)
    q, z = Fraction(args.q), Fraction(args.z)
    out = oscillatory_check_1d(X, q, z, args.prec, bound=args.bound)
    if X.r == 1 and len(X.sectors) == 1 and X.data.m == 2 and z == -1:
        out["bessel"] = bessel_oracle(q, args.prec)
    return out


def cmd_p1ttstar(args, ctx):
    from .ttstar import latex_table, metric, pde_check

    met = metric(args.order)
    out = {"F": met.to_strings()}
    if args.check_pde:
        res = pde_check(met, args.order)
        out["pde_residual_zero"] = all(not r.c for r in res)
    if args.latex:
        text = latex_table(met)
        if args.check_pde:
            text += f"\n% pde residual zero: {out['pde_residual_zero']}"
        return text
    return out


def cmd_periods(args, ctx):
    from .charclasses import psi
    from .periods import classify, period_form, period_json, point_class

    X = _orbifold(args.file)
    if bool(args.bundles) == bool(args.point):
        raise InputError("give exactly one of --bundles or --point")
    if args.bundles:
        A = psi(X, _bundle(X, args.bundles), args.prec)
    else:
        cone = tuple(sorted(int(t) for t in args.point.split(",")))
        phases = _vector(args.character, what="character") if args.character else None
        A = point_class(X, cone, phases, args.prec)
    info = classify(X, None, A, args.prec)
    out = {
        "vector": _numeric_class(X, A, ctx),
        "filtration": {"level": info.level, "in_ker_rho": info.in_VZ1, "in_ker_h2": info.in_ker_h2},
    }
    form = period_form(X, A, args.prec)
    out["period"] = period_json(X, form, ctx)
    if args.tau is not None:
        tau = _vector(args.tau, X.frame.r_prime, "tau")
        tw = {}
        for item in filter(None, (args.tau_tw or "").split(",")):
            w, _, val = item.partition("=")
            tw[int(w)] = Fraction(val)
        out["period"]["value"] = form.evaluate(X, tau, tw, args.prec)
    return out


# ---------------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="qcoh", description="Gamma-integral structures of toric orbifolds.")
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--prec", type=int, default=None, help="bits (default $QCOH_PREC or 256)")
    common.add_argument("--seed", type=int, default=0, help="RNG seed (echoed)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, helptext, file=True):
        s = sub.add_parser(name, parents=[common], help=helptext)
        if file:
            s.add_argument("file", help="*.toric.json or a shipped fixture name")
        s.set_defaults(func=func)
        return s

    add("validate", cmd_validate, "validate input and print the fan summary")
    add("box", cmd_box, "Box sectors with ages and cohomology dimensions")
    s = add("cone", cmd_cone, "exact cone membership", file=False)
    s.add_argument("file", nargs="?", help="optionally add the divisors D_i as generators")
    s.add_argument("--x", required=True, help="point, comma separated")
    s.add_argument("--gens", default="", help="generators 'g1;g2;...'")
    s.add_argument("--mode", choices=("open", "closed"), default="closed")
    s.add_argument("--subset", help="divisor indices to use with FILE")
    add("weakfano", cmd_weakfano, "weak Fano report")
    s = add("keff", cmd_keff, "effective classes up to a degree bound")
    s.add_argument("--bound", default="3")
    s = add("integrate", cmd_integrate, "integrate a class over a sector")
    s.add_argument("--sector", type=int, default=0)
    s.add_argument("--class", dest="cls", required=True, help="e.g. '1/2*p1^2+p2'")
    s = add("chi", cmd_chi, "orbifold Riemann-Roch")
    s.add_argument("--bundles", required=True)
    s.add_argument("--against", help="second bundle V2: computes chi(V2^vee (x) V1)")
    s.add_argument("--check-mukai", action="store_true")
    s = add("psi", cmd_psi, "Gamma-integral vector of a bundle")
    s.add_argument("--bundle", required=True)
    s = add("galois-check", cmd_galois, "Psi(V (x) L_xi^vee) = G(xi) Psi(V)")
    s.add_argument("--bundle", required=True)
    s.add_argument("--xi", required=True)
    s = add("ifunction", cmd_ifunction, "I-function coefficients")
    s.add_argument("--q-order", type=Fraction, default=Fraction(3))
    s = add("mirrormap", cmd_mirrormap, "mirror map")
    s.add_argument("--q-order", type=Fraction, default=Fraction(3))
    s = add("monodromy-check", cmd_monodromy, "Galois monodromy of the I-function")
    s.add_argument("--xi", required=True)
    s.add_argument("--q-order", type=Fraction, default=Fraction(3))
    s = add("oscint", cmd_oscint, "thimble integral against the H-function")
    s.add_argument("--q", default="1/100")
    s.add_argument("--z", default="-1")
    s.add_argument("--bound", type=int, default=8)
    s = add("p1ttstar", cmd_p1ttstar, "tt* metric of P^1", file=False)
    s.add_argument("--order", type=int, default=6)
    s.add_argument("--check-pde", action="store_true")
    s.add_argument("--latex", action="store_true")
    s = add("periods", cmd_periods, "integral periods in the conformal limit")
    s.add_argument("--bundles")
    s.add_argument("--point", help="top cone as complement indices 'i,j'")
    s.add_argument("--character", help="phases in [0,1), one per cyclic factor")
    s.add_argument("--tau", help="tau_{0,2} in the nef basis")
    s.add_argument("--tau-tw", help="'w=value,...' twisted coordinates")
    return p


def run(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.prec is None:
        args.prec = default_prec()
    try:
        ctx = context(args.prec)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        result = args.func(args, ctx)
    except QcohError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(payload), file=stdout)
        return exc.exit_code
    if isinstance(result, str):
        print(result, file=stdout)
        return 0
    doc = {"command": args.command, "seed": args.seed, "prec": args.prec}
    doc.update(_plain(result, ctx))
    if args.json:
        print(json.dumps(doc, indent=1, sort_keys=False), file=stdout)
    else:
        print("\n".join(_text(doc)), file=stdout)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
