"""Buchberger's algorithm for polynomial ideals over Q (degrevlex).

A polynomial is a dict mapping exponent tuples to nonzero Fractions.
"""

from fractions import Fraction
from itertools import combinations


def degrevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def leading(p):
    e = max(p, key=degrevlex_key)
    return e, p[e]


def p_add(p, q, k=1):
    out = dict(p)
    for e, c in q.items():
        v = out.get(e, 0) + k * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def p_mul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def p_mono(p, e, c):
    return {tuple(a + b for a, b in zip(k, e)): v * c for k, v in p.items()}


def divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def reduce(p, basis):
    """Full normal form of p modulo basis (list of polys with lead data)."""
    leads = [(leading(g), g) for g in basis]
    rem = {}
    p = dict(p)
    while p:
        e, c = leading(p)
        for (le, lc), g in leads:
            if divides(le, e):
                shift = tuple(x - y for x, y in zip(e, le))
                p = p_add(p, p_mono(g, shift, c / lc), -1)
                break
        else:
            rem[e] = c
            del p[e]
    return rem


def _spoly(f, g):
    (ef, cf), (eg, cg) = leading(f), leading(g)
    lcm = tuple(max(a, b) for a, b in zip(ef, eg))
    sf = tuple(a - b for a, b in zip(lcm, ef))
    sg = tuple(a - b for a, b in zip(lcm, eg))
    return p_add(p_mono(f, sf, 1 / cf), p_mono(g, sg, 1 / cg), -1)


def groebner(gens):
    """Reduced Groebner basis (monic, sorted by leading monomial)."""
    basis = [{e: Fraction(c) for e, c in g.items() if c} for g in gens]
    basis = [g for g in basis if g]
    pairs = list(combinations(range(len(basis)), 2))
    while pairs:
        i, j = pairs.pop(0)
        ei, ej = leading(basis[i])[0], leading(basis[j])[0]
        # coprime leading monomials: S-poly reduces to zero
        if all(a == 0 or b == 0 for a, b in zip(ei, ej)):
            continue
        s = reduce(_spoly(basis[i], basis[j]), basis)
        if s:
            basis.append(s)
            pairs.extend((k, len(basis) - 1) for k in range(len(basis) - 1))
    # minimalize
    basis.sort(key=lambda g: degrevlex_key(leading(g)[0]))
    minimal = []
    for g in basis:
        e = leading(g)[0]
        if not any(divides(leading(h)[0], e) for h in minimal):
            minimal.append(g)
    reduced = []
    for k, g in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1 :]
        e, c = leading(g)
        r = reduce(p_add(g, {e: c}, -1), others)
        r[e] = c
        reduced.append({m: v / c for m, v in r.items()})
    return reduced


def standard_monomials(basis, nvars):
    """Monomials not divisible by any leading term, by degree; None if infinite."""
    leads = [leading(g)[0] for g in basis]
    if any(sum(e) == 0 for e in leads):
        return []
    out = []
    deg = 0
    while True:
        layer = [e for e in _monomials(nvars, deg) if not any(divides(l, e) for l in leads)]
        if not layer:
            return out
        out.extend(sorted(layer, key=degrevlex_key, reverse=True))
        deg += 1
        if deg > 64:
            return None


def _monomials(nvars, deg):
    if nvars == 0:
        if deg == 0:
            yield ()
        return
    if nvars == 1:
        yield (deg,)
        return
    for first in range(deg, -1, -1):
        for rest in _monomials(nvars - 1, deg - first):
            yield (first,) + rest


def from_linear_product(forms, nvars):
    """Product of linear forms, each given as a coefficient list."""
    p = {(0,) * nvars: Fraction(1)}
    for f in forms:
        lin = {}
        for a, c in enumerate(f):
            if c:
                e = tuple(int(b == a) for b in range(nvars))
                lin[e] = Fraction(c)
        p = p_mul(p, lin)
    return p
