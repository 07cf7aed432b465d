"""Characteristic classes on the inertia stack and the Gamma-integral structure.

Numeric classes are ``OrbClass`` objects whose coefficient vectors hold
context complex numbers; the sector rings' exact structure constants and
exact top-degree integrals are reused unchanged.
"""

from fractions import Fraction
from itertools import product

from .cohomology import OrbClass, sector_ring
from .errors import DimensionMismatch, InputError, NotNearInteger, OracleMismatch
from .exact.lattice import hnf_rows, reduce_mod_lattice, snf, solve, transpose
from .exact.numeric import cnum, context, gamma_series, s_inv, s_mul, tolerance
from .exact.rational import frac
from .toric import dot


# ---------------------------------------------------------------------------
# K-classes

def pic_lattice(X):
    """HNF basis of sum_{j extra} Z D_j, the kernel of L^vee -> Pic."""
    return X.cached("pic", lambda: hnf_rows([X.data.D[j] for j in X.fan.extra]))


def canonical_xi(X, xi):
    if any(Fraction(x).denominator != 1 for x in xi):
        raise ValueError(f"line bundle class {xi} is not integral")
    return reduce_mod_lattice([int(x) for x in xi], pic_lattice(X))


class KClass:
    """Finite integer combination of line bundle classes [L_xi]."""

    __slots__ = ("X", "terms")

    def __init__(self, X, terms=None):
        self.X = X
        out = {}
        for xi, n in (terms or {}).items():
            key = canonical_xi(X, xi)
            out[key] = out.get(key, 0) + int(n)
        self.terms = {k: n for k, n in out.items() if n}

    @classmethod
    def line(cls, X, xi):
        return cls(X, {tuple(xi): 1})

    @classmethod
    def structure_sheaf(cls, X):
        return cls.line(X, (0,) * X.r)

    def __add__(self, other):
        terms = dict(self.terms)
        for k, n in other.terms.items():
            terms[k] = terms.get(k, 0) + n
        return KClass(self.X, terms)

    def __neg__(self):
        return KClass(self.X, {k: -n for k, n in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def dual(self):
        return KClass(self.X, {tuple(-x for x in k): n for k, n in self.terms.items()})

    def tensor(self, other):
        terms = {}
        for a, n in self.terms.items():
            for b, m in other.terms.items():
                k = tuple(x + y for x, y in zip(a, b))
                terms[k] = terms.get(k, 0) + n * m
        return KClass(self.X, terms)

    def rank(self):
        return sum(self.terms.values())

    def __eq__(self, other):
        return self.terms == other.terms

    def __repr__(self):
        return " + ".join(f"{n}*L{list(k)}" for k, n in sorted(self.terms.items())) or "0"


def parse_bundle(X, text):
    """Parse ';'-separated terms 'k*a1,...,ar' (k defaults to 1) into a KClass."""
    total = KClass(X)
    for chunk in filter(None, (t.strip() for t in text.split(";"))):
        k, _, coords = chunk.rpartition("*")
        try:
            xi = tuple(int(t) for t in coords.split(","))
            k = int(k) if k else 1
        except ValueError:
            raise InputError(f"bad bundle term {chunk!r}; expected integers 'k*a1,...,ar'") from None
        if len(xi) != X.r:
            raise DimensionMismatch(f"bundle {chunk!r} needs {X.r} coordinates")
        total = total + KClass(X, {xi: k})
    return total


# ---------------------------------------------------------------------------
# degree two classes on sectors

def nef_coords(X, xi):
    """Coordinates of xi in the nef basis p_1..p_r."""
    P = [list(row) for row in X.frame.p]
    return solve(transpose(P), list(xi))


def xi_bar(X, xi, v):
    """Restriction of the image of xi in H^2 to the sector ring of v."""
    return sector_ring(X, v).linear(nef_coords(X, xi))


def rho_bar(X, v):
    return xi_bar(X, X.frame.rho_hat, v)


def tangent_weights(X, v):
    """Chern root data [(f, delta)] of pr^*TX on X_v over genuine rays.

    delta is the exact vector of Dbar_j restricted to the sector ring.
    """
    s = X.sectors[v]
    ring = sector_ring(X, v)
    return [(frac(-dot(X.data.D[j], s.d)), ring.divisor(j)) for j in X.fan.genuine]


# ---------------------------------------------------------------------------
# numeric helpers on a sector ring

def _num(ctx, vec):
    return [cnum(ctx, x) for x in vec]


def _power_series(ring, coeffs, x, ctx):
    """sum_k coeffs[k] x^k for nilpotent x (exact or numeric vector)."""
    out = [ctx.mpc(0)] * ring.dim
    one = _num(ctx, ring.unit())
    term = one
    for k, c in enumerate(coeffs):
        if k > 0:
            term = ring.mul(term, x)
            if not any(term):
                break
        if c:
            out = [a + c * b for a, b in zip(out, term)]
    return out


def _exp_class(ring, x, ctx, scale=1):
    n = ring.n_v
    coeffs = [ctx.mpc(scale) ** k / ctx.factorial(k) for k in range(n + 1)]
    return _power_series(ring, coeffs, x, ctx)


def _gamma_factor(ctx, f, n, sign=1):
    """Series of Gamma(1 - f + sign*x)."""
    g = gamma_series(ctx, 1 - f, n)
    return [c * sign**k for k, c in enumerate(g)]


def _todd_factor(ctx, f, n):
    e = [ctx.mpc((-1) ** k) / ctx.factorial(k) for k in range(n + 2)]
    if f == 0:
        # x / (1 - e^{-x})
        return s_inv(ctx, [-c for c in e[1:]], n)
    c = ctx.expjpi(-2 * cnum(ctx, f))
    return s_inv(ctx, [1 - c * e[0]] + [-c * x for x in e[1 : n + 1]], n)


def _multiplicative(X, v, factor, ctx):
    """prod over roots (f, delta) of factor(f)(delta), as a vector on X_v."""
    ring = sector_ring(X, v)
    out = _num(ctx, ring.unit())
    for f, delta in tangent_weights(X, v):
        series = factor(f, ring.n_v)
        out = ring.mul(out, _power_series(ring, series, delta, ctx))
    return out


# ---------------------------------------------------------------------------
# characteristic classes

def tch(X, V, prec=None):
    ctx = context(prec)
    parts = {}
    for s in X.sectors:
        ring = sector_ring(X, s.index)
        acc = [ctx.mpc(0)] * ring.dim
        for xi, n in V.terms.items():
            phase = ctx.expjpi(2 * cnum(ctx, X.f(xi, s)))
            e = _exp_class(ring, xi_bar(X, xi, s.index), ctx)
            acc = [a + n * phase * b for a, b in zip(acc, e)]
        parts[s.index] = acc
    return OrbClass(X, parts)


def todd(X, prec=None):
    ctx = context(prec)
    return OrbClass(
        X,
        {s.index: _multiplicative(X, s.index, lambda f, n: _todd_factor(ctx, f, n), ctx) for s in X.sectors},
    )


def gamma_hat(X, prec=None):
    ctx = context(prec)
    return OrbClass(
        X,
        {s.index: _multiplicative(X, s.index, lambda f, n: _gamma_factor(ctx, f, n), ctx) for s in X.sectors},
    )


def integrate_num(X, cls):
    """Integral over the inertia stack of a numeric class."""
    ctx = context(_prec_of(cls))
    total = ctx.mpc(0)
    for v, vec in cls.parts.items():
        total += sector_ring(X, v).integrate(vec)
    return total


def _prec_of(cls):
    for vec in cls.parts.values():
        for x in vec:
            if hasattr(x, "context"):
                return x.context.prec
    return None


def chi_rr_value(X, V, prec=None):
    """Complex value of the orbifold Riemann-Roch integral of V."""
    return integrate_num(X, tch(X, V, prec).cup(todd(X, prec)))


def chi_rr(X, V1, V2=None, prec=None):
    """chi(V2^vee (x) V1) rounded to an integer; returns (value, residual)."""
    ctx = context(prec)
    V = V1 if V2 is None else V2.dual().tensor(V1)
    z = chi_rr_value(X, V, prec)
    k = int(ctx.nint(z.real))
    res = abs(z - k)
    if res > ctx.mpf(10) ** -10:
        raise NotNearInteger(f"chi = {ctx.nstr(z, 15)} is not an integer", value=str(z))
    return k, res


def degree_scale(X, cls, base):
    """Multiply the degree 2k part of each sector by base^k."""
    out = {}
    for v, vec in cls.parts.items():
        ring = sector_ring(X, v)
        out[v] = [c * base ** ring.degrees[k] for k, c in enumerate(vec)]
    return OrbClass(X, out)


def psi(X, V, prec=None):
    ctx = context(prec)
    t = degree_scale(X, tch(X, V, prec), 2 * ctx.pi * ctx.j).inv_star()
    pref = (2 * ctx.pi) ** (-ctx.mpf(X.n) / 2)
    return gamma_hat(X, prec).cup(t).scale(pref)


# ---------------------------------------------------------------------------
# the space V^X

class VSpace:
    """H*_orb with mu, rho and the pairing (e^{pi i rho} a, e^{pi i mu} b)_orb."""

    def __init__(self, X, prec=None):
        self.X = X
        self.ctx = context(prec)
        self.prec = self.ctx.prec
        self.basis = []
        for s in X.sectors:
            ring = sector_ring(X, s.index)
            for k in range(ring.dim):
                self.basis.append((s.index, k))

    @property
    def dim(self):
        return len(self.basis)

    def mu_value(self, v, k):
        s = self.X.sectors[v]
        return sector_ring(self.X, v).degrees[k] + s.age - Fraction(self.X.n, 2)

    def vector(self, cls):
        return [cnum(self.ctx, cls[v][k]) for v, k in self.basis]

    def from_vector(self, vec):
        parts = {}
        for (v, k), c in zip(self.basis, vec):
            parts.setdefault(v, [self.ctx.mpc(0)] * sector_ring(self.X, v).dim)[k] = c
        return OrbClass(self.X, parts)

    def basis_class(self, idx):
        v, k = self.basis[idx]
        vec = [self.ctx.mpc(0)] * sector_ring(self.X, v).dim
        vec[k] = self.ctx.mpc(1)
        return OrbClass(self.X, {v: vec})

    def exp_mu(self, cls, scale):
        """e^{scale * mu} applied to cls."""
        ctx = self.ctx
        out = {}
        for v, vec in cls.parts.items():
            out[v] = [c * ctx.exp(scale * cnum(ctx, self.mu_value(v, k))) for k, c in enumerate(vec)]
        return OrbClass(self.X, out)

    def exp_rho(self, cls, scale):
        """e^{scale * rho} cup cls."""
        out = {}
        for v, vec in cls.parts.items():
            ring = sector_ring(self.X, v)
            out[v] = ring.mul(_exp_class(ring, rho_bar(self.X, v), self.ctx, scale), vec)
        return OrbClass(self.X, out)

    def orb_pairing(self, a, b):
        total = self.ctx.mpc(0)
        for v, vec in a.parts.items():
            w = self.X.sectors[v].inv
            if w in b.parts:
                ring = sector_ring(self.X, v)
                total += ring.integrate(ring.mul(vec, b.parts[w]))
        return total

    def pairing(self, a, b):
        ctx = self.ctx
        return self.orb_pairing(self.exp_rho(a, ctx.pi * ctx.j), self.exp_mu(b, ctx.pi * ctx.j))

    def galois(self, xi, cls):
        """G^V(xi) = e^{-2 pi i xi_0} (+) e^{2 pi i f_v(xi)} per sector."""
        ctx = self.ctx
        out = {}
        for v, vec in cls.parts.items():
            ring = sector_ring(self.X, v)
            phase = ctx.expjpi(2 * cnum(ctx, self.X.f(xi, v)))
            e = _exp_class(ring, xi_bar(self.X, xi, v), ctx, -2 * ctx.pi * ctx.j)
            out[v] = [phase * c for c in ring.mul(e, vec)]
        return OrbClass(self.X, out)

    def kappa(self, cls):
        """Real involution of the Gamma-integral structure (antilinear)."""
        ctx = self.ctx
        X = self.X
        out = {}
        for v, vec in cls.parts.items():
            w = X.sectors[v].inv
            ring = sector_ring(X, w)
            conj = [ctx.conj(c) * (-1) ** ring.degrees[k] for k, c in enumerate(vec)]
            factor = self.kappa_factor(w)
            out[w] = ring.mul(factor, conj)
        return OrbClass(X, out)

    def kappa_factor(self, w):
        """prod Gamma(1 - f + delta) / Gamma(1 - fbar - delta) over roots of X_w."""
        ctx = self.ctx
        X = self.X

        def factor(f, n):
            fbar = 1 - f if f else 0
            num = gamma_series(ctx, 1 - f, n)
            den = [c * (-1) ** k for k, c in enumerate(gamma_series(ctx, 1 - fbar, n))]
            return s_mul(num, s_inv(ctx, den, n), n)

        return X.cached(("kappa", w, self.prec), lambda: _multiplicative(X, w, factor, ctx))

    def z_monodromy(self, cls):
        ctx = self.ctx
        return self.exp_mu(self.exp_rho(cls, 2 * ctx.pi * ctx.j), -2 * ctx.pi * ctx.j)

    def cup_h2(self, xi, cls):
        out = {}
        for v, vec in cls.parts.items():
            ring = sector_ring(self.X, v)
            out[v] = ring.mul(_num(self.ctx, xi_bar(self.X, xi, v)), vec)
        return OrbClass(self.X, out)

    def matrix(self, op):
        cols = [self.vector(op(self.basis_class(i))) for i in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def distance(self, a, b):
        va, vb = self.vector(a), self.vector(b)
        return max((abs(x - y) for x, y in zip(va, vb)), default=self.ctx.mpf(0))


def galois_V(X, xi, cls, prec=None):
    return VSpace(X, prec).galois(xi, cls)


def pairing_V(X, a, b, prec=None):
    return VSpace(X, prec).pairing(a, b)


def kappa_V(X, cls, prec=None):
    return VSpace(X, prec).kappa(cls)


def z_monodromy(X, cls, prec=None):
    return VSpace(X, prec).z_monodromy(cls)


def canonical_class(X):
    return KClass.line(X, tuple(-x for x in X.frame.rho_hat))


# ---------------------------------------------------------------------------
# checks

def mukai_residual(X, V1, V2, prec=None):
    W = VSpace(X, prec)
    lhs = W.pairing(psi(X, V1, prec), psi(X, V2, prec))
    k, _ = chi_rr(X, V1, V2, prec)
    return lhs, k, abs(lhs - k)


def galois_residual(X, V, xi, prec=None):
    W = VSpace(X, prec)
    lhs = psi(X, V.tensor(KClass.line(X, tuple(-x for x in xi))), prec)
    rhs = W.galois(xi, psi(X, V, prec))
    return W.distance(lhs, rhs)


def z_monodromy_residual(X, prec=None):
    """max over a basis of |e^{-2 pi i mu} e^{2 pi i rho} - (-1)^n G^V(K_X)|."""
    W = VSpace(X, prec)
    K = tuple(-x for x in X.frame.rho_hat)
    sign = (-1) ** X.n
    worst = W.ctx.mpf(0)
    for i in range(W.dim):
        e = W.basis_class(i)
        worst = max(worst, W.distance(W.z_monodromy(e), W.galois(K, e).scale(sign)))
    return worst


def kappa_checks(X, prec=None):
    """Residuals of kappa^2 = id and kappa(w a) = -w kappa(a), and leading scalars."""
    W = VSpace(X, prec)
    ctx = W.ctx
    sq = anti = ctx.mpf(0)
    h2 = [tuple(int(a == b) for b in range(X.r)) for a in range(X.r)]
    for i in range(W.dim):
        e = W.basis_class(i)
        sq = max(sq, W.distance(W.kappa(W.kappa(e)), e))
        for xi in h2:
            lhs = W.kappa(W.cup_h2(xi, e))
            rhs = W.cup_h2(xi, W.kappa(e)).scale(-1)
            anti = max(anti, W.distance(lhs, rhs))
    leading = []
    for s in X.sectors:
        f0 = W.kappa_factor(s.index)[0]
        leading.append(f0)
    return {"square": sq, "anticommute": anti, "leading": leading}


def reflection_residual(X, prec=None):
    """prod Gamma(1-f-d/2pi i) Gamma(1-fbar+d/2pi i) vs (2pi i)^{n-n_v} e^{-rho/2} e^{-pi i age} Td."""
    ctx = context(prec)
    tpi = 2 * ctx.pi * ctx.j
    T = todd(X, prec)
    worst = ctx.mpf(0)
    for s in X.sectors:
        v = s.index
        ring = sector_ring(X, v)

        def factor(f, n):
            fbar = 1 - f if f else 0
            a = [c / tpi**k for k, c in enumerate(_gamma_factor(ctx, f, n, -1))]
            b = [c / tpi**k for k, c in enumerate(gamma_series(ctx, 1 - fbar, n))]
            return s_mul(a, b, n)

        lhs = _multiplicative(X, v, factor, ctx)
        scale = tpi ** (X.n - s.n_v) * ctx.expjpi(-cnum(ctx, s.age))
        rhs = ring.mul(_exp_class(ring, rho_bar(X, v), ctx, ctx.mpf(-1) / 2), T[v])
        rhs = [scale * c for c in rhs]
        worst = max(worst, max(abs(x - y) for x, y in zip(lhs, rhs)))
    return worst


def line_bundle_generators(X, spread=None):
    """Line bundles L_xi with xi in a small box of nef coordinates, deduplicated."""
    dim = sum(sector_ring(X, s.index).dim for s in X.sectors)
    spread = spread if spread is not None else dim
    p = X.frame.p
    seen = {}
    for coeffs in product(range(0, spread + 1), repeat=X.r):
        xi = tuple(sum(c * p[a][i] for a, c in enumerate(coeffs)) for i in range(X.r))
        key = canonical_xi(X, xi)
        seen.setdefault(key, KClass.line(X, key))
    return list(seen.values())


def unimodularity(X, prec=None):
    """Invariant factors of the Mukai Gram matrix on a generating set of line bundles.

    The pairing is unimodular on the image lattice iff all nonzero invariant
    factors equal 1 and their number equals dim H*_orb.
    """
    gens = line_bundle_generators(X)
    W = VSpace(X, prec)
    psis = [psi(X, V, prec) for V in gens]
    ctx = W.ctx
    gram = []
    for a in psis:
        row = []
        for b in psis:
            z = W.pairing(a, b)
            k = int(ctx.nint(z.real))
            if abs(z - k) > ctx.mpf(10) ** -10:
                raise NotNearInteger("Mukai pairing is not integral", value=str(z))
            row.append(k)
        gram.append(row)
    factors = [d for d in snf(gram).diagonal if d]
    return {"rank": len(factors), "dim": W.dim, "factors": factors,
            "unimodular": len(factors) == W.dim and all(abs(d) == 1 for d in factors)}


def numeric_equal(ctx, a, b, tol=None):
    tol = tolerance(ctx) if tol is None else tol
    return abs(a - b) < tol


def assert_close(ctx, a, b, what, tol=None):
    if not numeric_equal(ctx, a, b, tol):
        raise OracleMismatch(f"{what}: {ctx.nstr(a, 20)} != {ctx.nstr(b, 20)}")
