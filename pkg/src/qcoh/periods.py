"""Integral periods in the conformal limit.

Vectors are numeric classes in V^X = H*_orb. The weight filtration is
W_k = sum_v H^{>= n_v - k}(X_v) in real degrees, and
a_0 = (2 pi i)^n (2 pi)^{-n/2} is the pairing of A_0 = Psi(O_x) with 1.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .charclasses import KClass, VSpace, _num, nef_coords, psi, xi_bar
from .cohomology import OrbClass, sector_ring
from .errors import CharacterInvalid, NotInFiltrationLevel
from .exact.lattice import snf
from .exact.numeric import cnum, context, to_json, tolerance
from .exact.rational import frac, to_str
from .toric import dot


def a0(ctx, n):
    return (2 * ctx.pi * ctx.j) ** n * (2 * ctx.pi) ** (-ctx.mpf(n) / 2)


# ---------------------------------------------------------------------------
# weight filtration

def weight_filtration(X):
    """{k: [(sector, basis index)]} for k = -n .. n."""
    out = {}
    for k in range(-X.n, X.n + 1):
        out[k] = [
            (s.index, i)
            for s in X.sectors
            for i, deg in enumerate(sector_ring(X, s.index).degrees)
            if 2 * deg >= s.n_v - k
        ]
    return out


def filtration_level(X, cls, tol):
    """Smallest k with cls in W_k (None for the zero vector)."""
    level = None
    for v, vec in cls.parts.items():
        s = X.sectors[v]
        ring = sector_ring(X, v)
        for i, c in enumerate(vec):
            if abs(c) > tol:
                k = s.n_v - 2 * ring.degrees[i]
                level = k if level is None else max(level, k)
    return level


def _is_zero(cls, tol):
    return all(abs(c) <= tol for vec in cls.parts.values() for c in vec)


def h2_basis(X):
    """Unit vectors of the nef basis (a <= r'), as xi coordinates in L^vee."""
    return [tuple(X.frame.p[a]) for a in range(X.frame.r_prime)]


@dataclass
class LatticeVector:
    bundle: KClass
    vector: OrbClass
    in_VZ1: bool
    in_ker_h2: bool
    level: int


def classify(X, V, vec, prec=None):
    ctx = context(prec)
    tol = tolerance(ctx)
    W = VSpace(X, prec)
    in_rho = _is_zero(W.cup_h2(X.frame.rho_hat, vec), tol)
    in_h2 = all(_is_zero(W.cup_h2(xi, vec), tol) for xi in h2_basis(X))
    return LatticeVector(V, vec, in_rho, in_h2, filtration_level(X, vec, tol))


def lattice_vectors(X, bundles, prec=None):
    return [classify(X, V, psi(X, V, prec), prec) for V in bundles]


# ---------------------------------------------------------------------------
# period forms

@dataclass
class PeriodForm:
    constant: object
    twisted_linear: dict  # sector -> coefficient of the H^0(X_w) coordinate
    exact_sectors: tuple  # sectors with n_w = n - 2 (the exact part)
    curve_class: list  # [C] . pbar_a for a <= r'
    rational_constant: object  # Fraction or None

    def evaluate(self, X, tau02, tau_tw, prec=None):
        ctx = context(prec)
        val = self.constant
        for w, c in self.twisted_linear.items():
            val += c * cnum(ctx, tau_tw.get(w, 0))
        pair = sum((c * cnum(ctx, t) for c, t in zip(self.curve_class, tau02)), ctx.mpc(0))
        return val - pair / (2 * ctx.pi * ctx.j)


def _rational_guess(ctx, x, max_den=1000):
    if abs(x.imag) > tolerance(ctx):
        return None
    r = Fraction(str(ctx.nstr(x.real, ctx.dps))).limit_denominator(max_den)
    return r if abs(x.real - ctx.mpf(r.numerator) / r.denominator) < tolerance(ctx) else None


def pair_with_unit(X, cls, w):
    """(cls, 1_w)_orb = integral over X_{inv w} of the inv(w) component."""
    u = X.sectors[w].inv
    if u not in cls.parts:
        return 0
    return sector_ring(X, u).integrate(cls.parts[u])


def period_form(X, A, prec=None, require_level=True):
    ctx = context(prec)
    n = X.n
    info = classify(X, None, A, prec)
    if require_level and (not info.in_VZ1 or (info.level is not None and info.level > -n + 2)):
        raise NotInFiltrationLevel(
            f"vector has level {info.level} (need <= {-n + 2}) and in Ker(rho) = {info.in_VZ1}"
        )
    a = a0(ctx, n)
    const = pair_with_unit(X, A, 0) / a
    twisted = {}
    exact = []
    for s in X.sectors:
        if s.index == 0 or s.age != 1:
            continue
        twisted[s.index] = -pair_with_unit(X, A, s.index) / a
        if s.n_v == n - 2:
            exact.append(s.index)
    # curve class from the H^{2n-2}(X) part of 2 pi i a0^{-1} A
    ring = sector_ring(X, 0)
    part = [
        c if ring.degrees[i] == n - 1 else 0
        for i, c in enumerate(A[0])
    ]
    part = [2 * ctx.pi * ctx.j * c / a for c in part]
    curve = []
    for xi in h2_basis(X):
        curve.append(cnum(ctx, ring.integrate(ring.mul(part, _num(ctx, xi_bar(X, xi, 0))))))
    return PeriodForm(const, twisted, tuple(exact), curve, _rational_guess(ctx, const))


def curve_integrality(X, A, classes, prec=None):
    """Distances of [C] . xi from the nearest integer for integral coarse classes xi."""
    ctx = context(prec)
    form = period_form(X, A, prec)
    out = []
    for xi in classes:
        c = nef_coords(X, xi)
        val = sum((cc * cnum(ctx, x) for cc, x in zip(form.curve_class, c)), ctx.mpc(0))
        out.append(abs(val - ctx.nint(val.real)))
    return out


def coarse_integral_classes(X, count=5, spread=3):
    """Integral xi in L^vee with f_v(xi) = 0 on every sector, nonzero in H^2."""
    found = []
    for xi in product(range(-spread, spread + 1), repeat=X.r):
        if not any(xi):
            continue
        if all(X.f(xi, s) == 0 for s in X.sectors) and any(xi_bar(X, xi, 0)):
            found.append(xi)
    found.sort(key=lambda x: (sum(abs(t) for t in x), x))
    return found[:count]


# ---------------------------------------------------------------------------
# point classes

@dataclass(frozen=True)
class Isotropy:
    cone: tuple
    factors: tuple  # invariant factors > 1
    elements: tuple  # (d, coordinates on the cyclic factors)


def isotropy(X, cone):
    I = tuple(cone)
    if I not in X.fan.top:
        raise CharacterInvalid(f"{list(I)} is not a top cone")
    dec = snf([list(X.data.D[i]) for i in I])
    e = dec.diagonal
    V = dec.V
    r = X.r
    elems = []
    for js in product(*(range(x) for x in e)):
        y = [Fraction(j, x) for j, x in zip(js, e)]
        d = tuple(frac(sum(V[a][k] * y[k] for k in range(r))) for a in range(r))
        coords = tuple(j for j, x in zip(js, e) if x > 1)
        elems.append((d, coords))
    return Isotropy(I, tuple(x for x in e if x > 1), tuple(elems))


def parse_character(iso, phases):
    phases = [Fraction(p) for p in (phases or [])]
    if not phases:
        phases = [Fraction(0)] * len(iso.factors)
    if len(phases) != len(iso.factors):
        raise CharacterInvalid(
            f"character needs {len(iso.factors)} phases for factors {list(iso.factors)}"
        )
    for p, e in zip(phases, iso.factors):
        if (p * e).denominator != 1:
            raise CharacterInvalid(f"phase {p} is not a character of Z/{e}")
    return phases


def character_of_line_bundle(X, cone, xi):
    """Phases of the isotropy character on the fibre of L_xi at the fixed point."""
    iso = isotropy(X, cone)
    dec = snf([list(X.data.D[i]) for i in iso.cone])
    out = []
    for k, e in enumerate(dec.diagonal):
        if e > 1:
            gen = [Fraction(dec.V[a][k], e) for a in range(X.r)]
            out.append(frac(dot(xi, gen)))
    return out


def point_class(X, cone, character=None, prec=None):
    """A_{(y, V)} for the fixed point of a top cone and a one-dimensional character."""
    ctx = context(prec)
    iso = isotropy(X, cone)
    phases = parse_character(iso, character)
    order = len(iso.elements)
    n = X.n
    pref = a0(ctx, n)
    parts = {}
    for d, coords in iso.elements:
        s = X.sector_of(d)
        chi = sum((p * c for p, c in zip(phases, coords)), Fraction(0))
        trace = ctx.expjpi(-2 * cnum(ctx, frac(chi)))  # Tr(g^{-1})
        gam = ctx.mpf(1)
        for j in range(X.data.m):
            if j in iso.cone:
                continue
            f = frac(-dot(X.data.D[j], d))
            if f:
                gam *= ctx.gamma(cnum(ctx, f).real)
        sign = ctx.expjpi(cnum(ctx, n + s.n_v + s.age))
        coeff = pref * sign * trace / (order * gam)
        ring = sector_ring(X, s.index)
        pt = [ctx.mpc(0)] * ring.dim
        pt[ring.top_index] = 1 / cnum(ctx, ring.top_integral)
        vec = parts.setdefault(s.index, [ctx.mpc(0)] * ring.dim)
        parts[s.index] = [a + coeff * b for a, b in zip(vec, pt)]
    return OrbClass(X, parts)


def skyscraper(X, cone, xi=None):
    """K-class of O_y (x) L_xi by the Koszul complex of the divisors through y."""
    K = KClass.structure_sheaf(X)
    for j in range(X.data.m):
        if j in cone or j in X.fan.extra:
            continue
        K = K.tensor(KClass.structure_sheaf(X) - KClass.line(X, tuple(-x for x in X.data.D[j])))
    if xi is not None:
        K = K.tensor(KClass.line(X, xi))
    return K


def period_json(X, form, ctx):
    return {
        "const": to_json(ctx, form.constant),
        "const_rational": to_str(form.rational_constant) if form.rational_constant is not None else None,
        "twisted_linear": {str(w): to_json(ctx, c) for w, c in form.twisted_linear.items()},
        "exact_sectors": list(form.exact_sectors),
        "curve_class": [to_json(ctx, c) for c in form.curve_class],
    }
