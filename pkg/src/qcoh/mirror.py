"""Hypergeometric I- and H-functions, mirror map and the thimble integral.

An I-function term is stored per d as a map z-exponent -> exact vector in
the sector ring of v(d). The prefactor exp(sum pbar_a log q_a / z) is never
expanded; the Galois check and the mirror map treat it symbolically.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .charclasses import (
    _exp_class, _num, _power_series, gamma_hat, nef_coords, rho_bar, todd,
)
from .cohomology import OrbClass, sector_ring
from .errors import AsymptoticsViolated, DimensionNotOne, NonInvertibleDenominator, QuadratureNotConverged
from .exact.numeric import cnum, context, real, rgamma_series, tolerance
from .exact.rational import frac, to_str
from .toric import dot, keff_enumerate


# ---------------------------------------------------------------------------
# z-Laurent polynomials with class coefficients

def _zc_mul_linear(ring, zc, delta, c):
    """Multiply by (delta + c z)."""
    out = {}
    for k, vec in zc.items():
        dv = ring.mul(delta, vec)
        _acc(out, k, dv)
        if c:
            _acc(out, k + 1, [c * x for x in vec])
    return out


def _zc_div_linear(ring, zc, delta, c):
    """Divide by (delta + c z) with c != 0: sum_j (-delta)^j / (c z)^{j+1}."""
    if not c:
        raise NonInvertibleDenominator("denominator factor has no z term")
    out = {}
    for k, vec in zc.items():
        term = vec
        j = 0
        while any(term):
            _acc(out, k - j - 1, [x / c ** (j + 1) for x in term])
            term = [-x for x in ring.mul(delta, term)]
            j += 1
    return out


def _acc(out, k, vec):
    if k in out:
        out[k] = [a + b for a, b in zip(out[k], vec)]
    else:
        out[k] = list(vec)
    if not any(out[k]):
        del out[k]


@dataclass(frozen=True)
class ITerm:
    d: tuple
    sector: int
    q_exponents: tuple  # <p_a, d>
    coeffs: dict  # z exponent -> exact vector in sector ring

    def to_json(self, X):
        return {
            "d": [to_str(x) for x in self.d],
            "sector": self.sector,
            "z_poly": {
                str(k): OrbClass(X, {self.sector: vec}).to_json()[0]["coeffs"]
                for k, vec in sorted(self.coeffs.items())
            },
        }


@dataclass
class IFunctionSeries:
    X: object
    bound: Fraction
    terms: list = field(default_factory=list)

    def term(self, d):
        key = tuple(Fraction(x) for x in d)
        for t in self.terms:
            if t.d == key:
                return t
        return None

    def to_json(self):
        return [t.to_json(self.X) for t in self.terms]


def i_term(X, d, sector):
    ring = sector_ring(X, sector.index)
    zc = {0: ring.unit()}
    for i in range(X.data.m):
        k = dot(X.data.D[i], d)
        delta = ring.divisor(i)
        if k < 0:
            # integers nu with k <= nu < 0
            for nu in range((k.__ceil__()), 0):
                zc = _zc_mul_linear(ring, zc, delta, k - nu)
        elif k > 0:
            for nu in range(0, (k.__ceil__())):
                zc = _zc_div_linear(ring, zc, delta, k - nu)
    qexp = tuple(dot(p, d) for p in X.frame.p)
    return ITerm(tuple(Fraction(x) for x in d), sector.index, qexp, zc)


def i_function(X, bound):
    series = IFunctionSeries(X, Fraction(bound))
    for d, s in keff_enumerate(X.fan, X.frame, bound, X.sectors):
        series.terms.append(i_term(X, d, s))
    return series


def homogeneity_defects(X, series):
    """Terms violating 2<rho,d> + 2k + deg_orb = 0."""
    bad = []
    for t in series.terms:
        ring = sector_ring(X, t.sector)
        age = X.sectors[t.sector].age
        rd = dot(X.frame.rho_hat, t.d)
        for k, vec in t.coeffs.items():
            for idx, c in enumerate(vec):
                if c and rd + k + ring.degrees[idx] + age != 0:
                    bad.append((t.d, k, idx))
    return bad


# ---------------------------------------------------------------------------
# mirror map

@dataclass
class MirrorMap:
    X: object
    bound: Fraction
    log_part: tuple  # classes pbar_a (a <= r') multiplying log q_a
    corrections: list  # (d, q exponents, sector, exact vector)

    def to_json(self):
        out = {"log": [OrbClass(self.X, {0: v}).to_json() for v in self.log_part], "terms": []}
        for d, qe, v, vec in self.corrections:
            out["terms"].append({
                "d": [to_str(x) for x in d],
                "q": [to_str(x) for x in qe],
                "class": OrbClass(self.X, {v: vec}).to_json(),
            })
        return out


def mirror_map(X, bound, series=None):
    series = series or i_function(X, bound)
    ring0 = sector_ring(X, 0)
    r1 = X.frame.r_prime
    logs = tuple(ring0.linear([int(a == b) for b in range(r1)]) for a in range(r1))
    corr = []
    for t in series.terms:
        ring = sector_ring(X, t.sector)
        is_zero = not any(t.d)
        for k, vec in t.coeffs.items():
            if k > 0 or (k == 0 and not is_zero):
                raise AsymptoticsViolated(f"term d={list(map(str, t.d))} has z^{k}")
        if is_zero:
            if t.coeffs.get(0) != ring.unit() or len(t.coeffs) != 1:
                raise AsymptoticsViolated("the d=0 term is not 1")
            continue
        vec = t.coeffs.get(-1)
        if vec is None:
            continue
        age = X.sectors[t.sector].age
        for idx, c in enumerate(vec):
            if c and ring.degrees[idx] + age > 1:
                raise AsymptoticsViolated(
                    f"z^-1 coefficient at d={list(map(str, t.d))} leaves H^<=2_orb"
                )
        corr.append((t.d, t.q_exponents, t.sector, vec))
    return MirrorMap(X, Fraction(bound), logs, corr)


# ---------------------------------------------------------------------------
# Galois monodromy

def galois_monodromy_check(X, xi, bound, series=None):
    """I(e^{-2 pi i xi} q, z) = G^H([xi]) I(q, z), term by term.

    Returns (ok, first failing d or None).
    """
    series = series or i_function(X, bound)
    ring0 = sector_ring(X, 0)
    # prefactor shift: sum_a xi_a pbar_a must equal the H^2 image of xi
    coords = nef_coords(X, xi)
    shift = ring0.linear(coords)
    ell = X.frame.ell
    via_split = [Fraction(0)] * ring0.dim
    for i in range(X.data.m):
        c = sum(Fraction(coords[a]) * ell[i][a] for a in range(X.r))
        if c:
            via_split = [x + c * y for x, y in zip(via_split, ring0.divisor(i))]
    if shift != via_split:
        return False, None
    for t in series.terms:
        q_phase = -dot(xi, t.d)  # exponent of e^{2 pi i .} from q^d
        g_phase = X.f(xi, t.sector)
        if frac(q_phase - g_phase) != 0:
            return False, t.d
    return True, None


# ---------------------------------------------------------------------------
# numeric H-function

def _logs(ctx, X, q, z):
    logz = ctx.log(abs(real(ctx, z))) + ctx.pi * ctx.j if z < 0 else ctx.log(cnum(ctx, z))
    logq = [ctx.log(cnum(ctx, x)) for x in q]
    logx = [lq - X.frame.rho[a] * logz for a, lq in enumerate(logq)]
    return logz, logq, logx


def h_term_closed(X, t, q, z, ctx):
    """Closed form of the d-term of H(q, z), a vector on the sector inv(v(d))."""
    w = X.sectors[t.sector].inv
    ring = sector_ring(X, w)
    logz, _, logx = _logs(ctx, X, q, z)
    tpi = 2 * ctx.pi * ctx.j
    pbar_log = [ctx.mpc(0)] * ring.dim
    for a in range(X.frame.r_prime):
        unit = ring.linear([int(a == b) for b in range(X.frame.r_prime)])
        pbar_log = [x + logx[a] / tpi * y for x, y in zip(pbar_log, unit)]
    vec = _exp_class(ring, pbar_log, ctx)
    scal = ctx.exp(sum(cnum(ctx, e) * lx for e, lx in zip(t.q_exponents, logx)))
    scal *= (2 * ctx.pi) ** (ctx.mpf(X.n) / 2) * ctx.exp(-ctx.mpf(X.n) / 2 * logz)
    n = ring.n_v
    for i in range(X.data.m):
        k = dot(X.data.D[i], t.d)
        series = rgamma_series(ctx, 1 + k, n)
        series = [c / tpi**j for j, c in enumerate(series)]
        vec = ring.mul(vec, _power_series(ring, series, ring.divisor(i), ctx))
    return w, [scal * x for x in vec]


def i_term_value(X, t, q, z, ctx):
    """Numeric value of the full d-term of I(q, z) including the prefactor."""
    ring = sector_ring(X, t.sector)
    _, logq, _ = _logs(ctx, X, q, z)
    zz = cnum(ctx, z)
    pre = [ctx.mpc(0)] * ring.dim
    for a in range(X.frame.r_prime):
        unit = ring.linear([int(a == b) for b in range(X.frame.r_prime)])
        pre = [x + logq[a] / zz * y for x, y in zip(pre, unit)]
    pre = _exp_class(ring, pre, ctx)
    qd = ctx.exp(sum(cnum(ctx, e) * lq for e, lq in zip(t.q_exponents, logq)))
    body = [ctx.mpc(0)] * ring.dim
    for k, vec in t.coeffs.items():
        body = [b + zz**k * cnum(ctx, x) for b, x in zip(body, vec)]
    return [qd * x for x in ring.mul(pre, body)]


def h_term_from_i(X, t, q, z, ctx):
    """(2 pi)^{n/2} inv^* (2 pi i)^{-deg/2} Gamma_hat^{-1} (z^{-rho} z^mu I_d)."""
    v = t.sector
    ring = sector_ring(X, v)
    logz, _, _ = _logs(ctx, X, q, z)
    val = i_term_value(X, t, q, z, ctx)
    age = X.sectors[v].age
    val = [c * ctx.exp((ring.degrees[k] + cnum(ctx, age) - ctx.mpf(X.n) / 2) * logz) for k, c in enumerate(val)]
    val = ring.mul(_exp_class(ring, rho_bar(X, v), ctx, -logz), val)
    gh = gamma_hat(X, ctx.prec)[v]
    val = ring.mul(_inverse_unit(ring, gh, ctx), val)
    tpi = 2 * ctx.pi * ctx.j
    val = [c / tpi ** ring.degrees[k] for k, c in enumerate(val)]
    scale = (2 * ctx.pi) ** (ctx.mpf(X.n) / 2)
    return X.sectors[v].inv, [scale * c for c in val]


def _inverse_unit(ring, vec, ctx):
    """Inverse of c(1 + nilpotent)."""
    c0 = vec[0]
    one = _num(ctx, ring.unit())
    nil = [x / c0 - o for x, o in zip(vec, one)]
    out = list(one)
    term = list(one)
    for _ in range(ring.n_v):
        term = [-x for x in ring.mul(term, nil)]
        out = [a + b for a, b in zip(out, term)]
    return [x / c0 for x in out]


def h_consistency_residual(X, bound, q, z, prec=None):
    ctx = context(prec)
    series = i_function(X, bound)
    worst = ctx.mpf(0)
    for t in series.terms:
        w1, a = h_term_closed(X, t, q, z, ctx)
        w2, b = h_term_from_i(X, t, q, z, ctx)
        assert w1 == w2
        worst = max(worst, max(abs(x - y) for x, y in zip(a, b)))
    return worst


def h_function(X, bound, q, z, prec=None):
    """H(q, z) truncated at |d| <= bound, as a numeric OrbClass."""
    ctx = context(prec)
    parts = {}
    for t in i_function(X, bound).terms:
        w, vec = h_term_closed(X, t, q, z, ctx)
        if w in parts:
            parts[w] = [a + b for a, b in zip(parts[w], vec)]
        else:
            parts[w] = vec
    return OrbClass(X, parts)


# ---------------------------------------------------------------------------
# thimble integral for one-dimensional mirrors

def superpotential_terms(X, q, splitting=None):
    """[(coefficient q^{ell_i}, exponent b_i)] on the free part (n = 1)."""
    if X.n != 1:
        raise DimensionNotOne(f"mirror has dimension {X.n}")
    ell = splitting if splitting is not None else X.frame.ell
    out = []
    for i in range(X.data.m):
        expo = [ell[i][a] for a in range(X.r)]
        out.append((expo, X.fan.b_free(i)[0]))
    return out


def _integrand(ctx, terms, q, z):
    coeffs = []
    for expo, b in terms:
        c = ctx.mpf(1)
        for e, qa in zip(expo, q):
            c *= ctx.power(cnum(ctx, qa).real, cnum(ctx, e).real)
        coeffs.append((c, b))
    zz = real(ctx, z)

    def f(u):
        w = sum(c * ctx.exp(b * u) for c, b in coeffs)
        return ctx.exp(w / zz)

    return f, coeffs


def thimble_integral(X, q, z, prec=None, splitting=None):
    """(-2 pi z)^{-1/2} int_0^inf e^{W_q(y)/z} dy/y by trapezoid sums in u = log y."""
    ctx = context(prec)
    if X.fan.torsion:
        raise DimensionNotOne("thimble integral implemented for connected fibres only")
    if z >= 0:
        raise ValueError("z must be negative")
    f, coeffs = _integrand(ctx, superpotential_terms(X, q, splitting), q, z)
    tol = tolerance(ctx)
    # W/z grows doubly exponentially in |u|; cut where exp(W/z) < tol^2
    cut = ctx.mpf(ctx.prec) * ctx.ln2 * abs(real(ctx, z))
    U = ctx.mpf(1)
    def decayed(U):
        return all(
            any(c * ctx.exp(b * s * U) >= cut for c, b in coeffs if b * s > 0) for s in (1, -1)
        )

    while not decayed(U):
        U *= 2
        if U > 1e4:
            raise QuadratureNotConverged("could not bracket the integrand")
    h = ctx.mpf(1) / 2
    prev = None
    for _ in range(16):
        N = int(ctx.ceil(U / h))
        total = sum(f(k * h) for k in range(-N, N + 1)) * h
        if prev is not None and abs(total - prev) < tol:
            pref = (-2 * ctx.pi * real(ctx, z)) ** (-ctx.mpf(1) / 2)
            return pref * total, abs(total - prev)
        prev = total
        h /= 2
    raise QuadratureNotConverged("step halving did not converge")


def bessel_oracle(q, prec=None):
    """(2/sqrt(2 pi)) K_0(2 sqrt q), the P^1 thimble at z = -1."""
    ctx = context(prec)
    qq = cnum(ctx, q).real
    return 2 / ctx.sqrt(2 * ctx.pi) * ctx.besselk(0, 2 * ctx.sqrt(qq))


def oscillatory_check_1d(X, q, z, prec=None, bound=8):
    """Thimble integral against (tch^{-1} H(q, z), O) = int_{IX} H Td."""
    ctx = context(prec)
    qs = (Fraction(q),) * X.r if not isinstance(q, (tuple, list)) else tuple(Fraction(x) for x in q)
    lhs, qerr = thimble_integral(X, qs, Fraction(z), prec)
    H = h_function(X, bound, qs, Fraction(z), prec)
    T = todd(X, prec)
    rhs = ctx.mpc(0)
    for v, vec in H.parts.items():
        ring = sector_ring(X, v)
        rhs += ring.integrate(ring.mul(vec, T[v]))
    # alternative splittings: the integral must not depend on them
    alt = []
    for I, ell in sorted(X.frame.ell_sigma.items()):
        split = [ell.get(i, (Fraction(0),) * X.r) for i in range(X.data.m)]
        val, _ = thimble_integral(X, qs, Fraction(z), prec, split)
        alt.append(abs(val - lhs))
    return {
        "lhs": lhs,
        "rhs": rhs,
        "residual": abs(lhs - rhs),
        "quadrature_step_error": qerr,
        "splitting_spread": max(alt) if alt else ctx.mpf(0),
    }
