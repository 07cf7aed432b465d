"""Cecotti-Vafa (tt*) structure of the projective line via Birkhoff factorization.

Everything lives in the exact ring Q[a, 1/a][z, 1/z], realised as nested
:class:`LaurentPoly` objects (outer variable ``z``, inner variable ``a``),
and series in (q, qbar) are :class:`BiSeries` truncated on a box.  The
symbol ``a`` stands for ``-t - tbar - 4*gamma``; Euler's constant only
becomes numeric in :func:`positivity_check`.

Conjugation is the ring involution q <-> qbar, z -> 1/z, a -> a.  This is
legitimate because every coefficient in sight is rational and z is taken
on the unit circle.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import MixedTermsSurvive, OracleMismatch
from .exact.laurent import LaurentPoly, laurent_split
from .exact.rational import to_str
from .exact.series import BiSeries, Mat
from .exact import numeric


# ---------------------------------------------------------------------------
# the working ring

ZERO = LaurentPoly({}, "z")


def apoly(coeffs):
    """Laurent polynomial in a from {exponent: rational}."""
    return LaurentPoly({k: Fraction(v) for k, v in coeffs.items()}, "a")


def elem(terms):
    """Element of Q[a^±][z^±] from {(z_exp, a_exp): rational}."""
    outer = {}
    for (zk, ak), v in terms.items():
        outer.setdefault(zk, {})[ak] = Fraction(v)
    return LaurentPoly({zk: apoly(inner) for zk, inner in outer.items()}, "z")


ONE = elem({(0, 0): 1})


def _w(x):
    """Promote a bare zero (from an empty matrix sum) to the ring zero."""
    return x if isinstance(x, LaurentPoly) else ZERO if not x else elem({(0, 0): x})


def conj(x):
    """z -> 1/z on a ring element; a and rationals fixed."""
    return _w(x).invert_var()


def conj_mat(M):
    return M.map(conj)


def conj_series(S, f=conj):
    """q <-> qbar together with the coefficient involution ``f``."""
    return S.swap(f)


def a_derivative(p):
    """d/da on a Laurent polynomial in a."""
    return LaurentPoly({k - 1: k * v for k, v in p.c.items() if k}, "a")


# ---------------------------------------------------------------------------
# J-series and the constant matrices

def harmonic(k):
    return sum((Fraction(1, j) for j in range(1, k + 1)), Fraction(0))


def j_series(order, box=None):
    """(J0, J1) as q-series with z-Laurent coefficients through q^order."""
    box = box or (order, order)
    j0, j1 = {}, {}
    for k in range(order + 1):
        c = Fraction(1, factorial(k) ** 2)
        j0[(k, 0)] = elem({(-2 * k, 0): c})
        if k:
            j1[(k, 0)] = elem({(-2 * k, 0): -2 * harmonic(k) * c})
    return BiSeries(j0, box=box), BiSeries(j1, box=box)


def q_derivative(S):
    """q d/dq on a BiSeries."""
    return BiSeries({(n, m): v * n for (n, m), v in S.items() if n}, order=S.order, box=S.box)


def qbar_derivative(S):
    return BiSeries({(n, m): v * m for (n, m), v in S.items() if m}, order=S.order, box=S.box)


Z = elem({(1, 0): 1})
ZINV = elem({(-1, 0): 1})
A = elem({(0, 1): 1})
AINV = elem({(0, -1): 1})

B_MAT = Mat([[ONE, elem({(1, -1): 1})], [ZERO, ONE]])
B_INV = Mat([[ONE, elem({(1, -1): -1})], [ZERO, ONE]])
C_MAT = Mat([[ZERO, AINV], [A, -ZINV]])
C_INV = Mat([[ZINV, AINV], [A, ZERO]])
# matrix of kappa_H in the frame (1, omega); it is followed by conjugation
K_MAT = Mat([[Z, ZERO], [A, -ZINV]])
IDENT = Mat([[ONE, ZERO], [ZERO, ONE]])


def q_matrix(order, box=None):
    """Q = [[J0, z dJ0], [J1/z, J0 + dJ1]] as a BiSeries of 2x2 matrices."""
    J0, J1 = j_series(order, box)
    dJ0, dJ1 = q_derivative(J0), q_derivative(J1)
    coeffs = {}
    for k in range(order + 1):
        key = (k, 0)
        coeffs[key] = Mat([
            [J0[key] or ZERO, (dJ0[key] or ZERO) * Z],
            [(J1[key] or ZERO) * ZINV, (J0[key] or ZERO) + (dJ1[key] or ZERO)],
        ])
    return BiSeries(coeffs, box=J0.box)


def _mat_series_map(S, f):
    return S.map(lambda M: M.map(f))


# ---------------------------------------------------------------------------
# S matrix, two independent constructions

def _re2(X):
    """2 Re X = X + conj(X)."""
    return X + conj_series(X)


def s_matrix_closed_form(box):
    """Entry-by-entry transcription of the closed formula for S."""
    order = max(box)
    J0, J1 = j_series(order, box)
    J0, J1 = J0.truncate(box=box), J1.truncate(box=box)
    dJ0, dJ1 = q_derivative(J0), q_derivative(J1)
    cJ0, cJ1, cdJ0, cdJ1 = (conj_series(x) for x in (J0, J1, dJ0, dJ1))
    a, a2, ai, ai2 = A, A * A, AINV, AINV * AINV

    re_j0j1 = _re2(J0 * cJ1)
    s11 = (
        re_j0j1 * ai
        + J0 * cJ0
        + _re2(dJ0 * cJ1 + J0 * cdJ1)
        + _re2(dJ0 * cdJ1) * a
        - (dJ0 * cdJ0) * a2
    )
    s12 = (re_j0j1 * ai2 + (dJ0 * cJ1 + cJ0 * dJ1) * ai - dJ0 * cJ0) * Z
    s21 = (-re_j0j1 - (cdJ0 * J1 + J0 * cdJ1) * a + (J0 * cdJ0) * a2) * ZINV
    s22 = -_re2(J1 * cJ0) * ai + J0 * cJ0
    keys = set(s11.c) | set(s12.c) | set(s21.c) | set(s22.c)
    coeffs = {
        k: Mat([[s11[k] or ZERO, s12[k] or ZERO], [s21[k] or ZERO, s22[k] or ZERO]])
        for k in keys
    }
    return BiSeries(coeffs, box=box)


def s_matrix_assembled(box):
    """S = B^-1 Q^-1 kappa(Q) C^-1 with Q^-1 from series inversion."""
    order = max(box)
    Qs = q_matrix(order, box).truncate(box=box)
    Qinv = Qs.inverse(IDENT)
    kQ = conj_series(Qs, conj_mat).map(lambda M: K_MAT * M)
    return (Qinv * kQ).map(lambda M: B_INV * M * C_INV)


def s_matrix(box):
    """Both constructions, asserted equal; returns the common table."""
    box = tuple(box)
    s1 = s_matrix_closed_form(box)
    s2 = s_matrix_assembled(box)
    for n in range(box[0] + 1):
        for m in range(box[1] + 1):
            x, y = s1[(n, m)], s2[(n, m)]
            if not _mat_equal(x, y):
                raise OracleMismatch(
                    f"closed-form and assembled S disagree at bidegree {(n, m)}",
                    closed=x, assembled=y,
                )
    return s2


def _mat_equal(x, y):
    x = x if isinstance(x, Mat) else Mat([[ZERO, ZERO], [ZERO, ZERO]])
    y = y if isinstance(y, Mat) else Mat([[ZERO, ZERO], [ZERO, ZERO]])
    return all(u == v for r, s in zip(x.rows, y.rows) for u, v in zip(r, s))


# ---------------------------------------------------------------------------
# Birkhoff factorization

def birkhoff_recursion(S, box):
    """Solve S = Bt * Ct degree by degree; Bt(z=0) = 1, Ct has z-exponents <= 0."""
    N, M = box
    Bt = {(0, 0): IDENT}
    Ct = {(0, 0): IDENT}
    order = sorted(((n, m) for n in range(N + 1) for m in range(M + 1)), key=lambda k: (sum(k), k))
    for n, m in order:
        if (n, m) == (0, 0):
            if not _mat_equal(S[(0, 0)], IDENT):
                raise OracleMismatch("S_{0,0} is not the identity")
            continue
        R = S[(n, m)] or Mat([[ZERO, ZERO], [ZERO, ZERO]])
        for i in range(n + 1):
            for j in range(m + 1):
                if (i, j) == (0, 0) or (i, j) == (n, m):
                    continue
                b, c = Bt.get((i, j)), Ct.get((n - i, m - j))
                if b is not None and c is not None:
                    R = R - b * c
        pos = [[None, None], [None, None]]
        nonpos = [[None, None], [None, None]]
        for r in range(2):
            for s in range(2):
                pos[r][s], nonpos[r][s] = laurent_split(_w(R[r, s]))
        Bt[(n, m)] = Mat(pos)
        Ct[(n, m)] = Mat(nonpos)
    return BiSeries(Bt, box=box), BiSeries(Ct, box=box)


def b_btilde(box):
    """The product B * Btilde, the series compared against the printed display."""
    S = s_matrix(box)
    Bt, _ = birkhoff_recursion(S, box)
    return Bt.map(lambda X: B_MAT * X)


# ---------------------------------------------------------------------------
# the metric

def _pair(u, v):
    """Hermitian pairing of two frame vectors (after the z -> -z twist).

    ``u``, ``v`` are BiSeries of column vectors (2x1 Mat). The first slot is
    conjugated and evaluated at -z; the omega-integral picks the omega
    coefficient of the cup product in H*(P^1).
    """
    ub = conj_series(u, lambda X: X.map(lambda e: _w(e).invert_var(sign=-1)))
    prod = {}
    for (n1, m1), x in ub.items():
        for (n2, m2), y in v.items():
            k = (n1 + n2, m1 + m2)
            if not v.keeps(*k) or not ub.keeps(*k):
                continue
            x0, x1 = _w(x[0, 0]), _w(x[1, 0])
            y0, y1 = _w(y[0, 0]), _w(y[1, 0])
            term = A * (x0 * y0) - Z * (x0 * y1) + ZINV * (x1 * y0)
            prod[k] = prod[k] + term if k in prod else term
    return BiSeries(prod, box=v.box)


def frame(box):
    """Columns of Q B Btilde as two BiSeries of column vectors."""
    order = max(box)
    S = s_matrix(box)
    Bt, _ = birkhoff_recursion(S, box)
    Qs = q_matrix(order, box).truncate(box=box)
    X = Qs * Bt.map(lambda M: B_MAT * M)
    col = lambda j: X.map(lambda M: Mat([[M[0, j]], [M[1, j]]]))
    return col(0), col(1)


def _diagonal_series(P, what):
    """Collapse a (q, qbar) series to an s = q qbar series of a-polynomials."""
    out = {}
    for (n, m), v in P.items():
        if not v:
            continue
        if n != m:
            raise MixedTermsSurvive(f"{what}: term q^{n} qbar^{m} survives", value=v)
        if not v.is_constant():
            raise MixedTermsSurvive(f"{what}: coefficient of s^{n} depends on z", value=v)
        out[n] = v.constant() or apoly({})
    N = min(P.box)
    return [out.get(n, apoly({})) for n in range(N + 1)]


@dataclass(frozen=True)
class MetricSeries:
    F: tuple  # Laurent polynomials in a (var "a")

    @property
    def order(self):
        return len(self.F) - 1

    def polynomial(self, n):
        """F_n as {exponent: Fraction}, checking there are no negative powers."""
        p = self.F[n]
        if p.c and min(p.c) < 0:
            raise OracleMismatch(f"F_{n} has negative powers of a")
        return dict(sorted(p.c.items()))

    def to_strings(self):
        return [poly_to_str(f) for f in self.F]


def metric(order):
    """h_{0bar 0} = sum F_n (q qbar)^n with F_n in Q[a]."""
    box = (order, order)
    X0, _ = frame(box)
    h = _diagonal_series(_pair(X0, X0), "h")
    return MetricSeries(tuple(h))


def metric_matrix(order):
    """All four pairings of the frame columns, as s-series (must be diag(h, 1/h))."""
    box = (order, order)
    cols = frame(box)
    out = [[None, None], [None, None]]
    for i in range(2):
        for j in range(2):
            out[i][j] = _diagonal_series(_pair(cols[i], cols[j]), f"h_{i}{j}")
    return out


# ---------------------------------------------------------------------------
# s-series over Laurent polynomials in a

def s_mul(x, y, N):
    out = [apoly({}) for _ in range(N + 1)]
    for i, u in enumerate(x[: N + 1]):
        if not u:
            continue
        for j, v in enumerate(y[: N + 1 - i]):
            if v:
                out[i + j] = out[i + j] + u * v
    return out


def s_inv_unit(x, N):
    """Inverse of a series whose constant term is the unit 1."""
    out = [apoly({0: 1})] + [apoly({}) for _ in range(N)]
    for k in range(1, N + 1):
        acc = apoly({})
        for j in range(1, k + 1):
            if j < len(x) and x[j]:
                acc = acc + x[j] * out[k - j]
        out[k] = -acc
    return out


def s_log_unit(x, N):
    """log of a series with constant term 1, via L' = x'/x."""
    inv = s_inv_unit(x, N)
    dx = [x[k] * k if k < len(x) else apoly({}) for k in range(N + 1)]
    q = s_mul(dx, inv, N)
    return [apoly({})] + [q[k] / k for k in range(1, N + 1)]


def d1(series):
    """s d/ds - d/da on an s-series."""
    return [series[k] * k - a_derivative(series[k]) for k in range(len(series))]


@dataclass(frozen=True)
class LogMetric:
    """log h = log a + L, with L an s-series; d1(log a) = -1/a."""

    L: tuple

    def d1(self):
        out = d1(list(self.L))
        out[0] = out[0] + apoly({-1: -1})
        return out


def log_metric(met):
    N = met.order
    ainv = apoly({-1: 1})
    u = [f * ainv for f in met.F]  # h / a, constant term 1
    return LogMetric(tuple(s_log_unit(u, N)))


def pde_check(met, order=None):
    """Residual of d1 d1bar log h + h^-2 - s h^2 as an s-series.

    Both derivatives act as s d/ds - d/da on functions of (s, a).
    """
    N = met.order if order is None else min(order, met.order)
    F = list(met.F[: N + 1])
    lm = log_metric(MetricSeries(tuple(F)))
    first = lm.d1()
    second = d1(first)
    h = F
    h2 = s_mul(h, h, N)
    a2inv = apoly({-2: 1})
    hinv_over = s_inv_unit([f * apoly({-1: 1}) for f in F], N)
    hinv2 = [x * a2inv for x in s_mul(hinv_over, hinv_over, N)]
    sh2 = [apoly({})] + h2[:N]
    return [second[k] + hinv2[k] - sh2[k] for k in range(N + 1)]


def cv_data(met):
    """Operator data of the Cecotti-Vafa structure as s-series tables.

    Entries that involve e^t or e^tbar are returned as pairs
    (symbol, s-series) with symbol in {"q", "qbar"}.
    """
    N = met.order
    dlog = log_metric(met).d1()
    one = apoly({0: 1})
    h = list(met.F)
    hinv = [x * apoly({-1: 1}) for x in s_inv_unit([f * apoly({-1: 1}) for f in h], N)]
    hinv2 = s_mul(hinv, hinv, N)
    h2 = s_mul(h, h, N)
    qdiag = [(-Fraction(1, 2) * one if k == 0 else apoly({})) - dlog[k] * 2 for k in range(N + 1)]
    g = [[0, 1], [1, 0]]
    # Q is anti-self-adjoint for g when its two diagonal entries are opposite
    q11, q22 = qdiag, [-x for x in qdiag]
    if any(q11[k] + q22[k] for k in range(N + 1)):
        raise OracleMismatch("g(Qu, v) + g(u, Qv) != 0")
    # kappa Q kappa^{-1}: kappa swaps the two diagonal slots and conjugates.
    # conj(d1 log h) = d1bar log h, which on these real s-series is the same series
    if any(q22[k] - (-q11[k]) for k in range(N + 1)):
        raise OracleMismatch("Q kappa != -kappa Q")
    return {
        "g": g,
        "kappa": [[0, ("h^-1", hinv)], [("h", h), 0]],
        "D1": [[dlog, None], [None, [-x for x in dlog]]],
        "C1": [[0, ("q", [one])], [1, 0]],
        "C1bar_tilde": [[0, ("1", hinv2)], [("qbar", h2), 0]],
        "Q": [[q11, None], [None, q22]],
        "dlog_h": dlog,
    }


# ---------------------------------------------------------------------------
# numerics

def evaluate_metric(met, absq, prec=None):
    """h at a = -2 log|q| - 4 gamma, as a real bigfloat."""
    ctx = numeric.context(prec)
    x = ctx.mpf(absq.numerator) / absq.denominator if isinstance(absq, Fraction) else ctx.mpf(absq)
    a = -2 * ctx.log(x) - 4 * ctx.euler
    s = x * x
    total = ctx.mpf(0)
    for n, F in enumerate(met.F):
        total += sum(ctx.mpf(c.numerator) / c.denominator * a ** k for k, c in F.c.items()) * s ** n
    return total


def positivity_check(met, values=("1/1000", "1/100", "1/10"), prec=None):
    return {v: evaluate_metric(met, Fraction(v), prec) > 0 for v in values}


def painleve_residual(met, x, prec=None):
    """Residual of u'' + u'/x - 4 sinh(u) with h = e^{u/2}|q|^{-1/2}, x = 4|q|^{1/2}.

    Derivatives are taken numerically at working precision; the residual is
    small only where the truncated series is accurate (small |q|).
    """
    ctx = numeric.context(prec)

    def u(y):
        absq = (y / 4) ** 2
        a = -2 * ctx.log(absq) - 4 * ctx.euler
        s = absq * absq
        h = sum(
            sum(ctx.mpf(c.numerator) / c.denominator * a ** k for k, c in F.c.items()) * s ** n
            for n, F in enumerate(met.F)
        )
        return 2 * ctx.log(h * ctx.sqrt(absq))

    x = ctx.mpf(x)
    u0 = u(x)
    u1 = ctx.diff(u, x, 1)
    u2 = ctx.diff(u, x, 2)
    return u2 + u1 / x - 4 * ctx.sinh(u0)


# ---------------------------------------------------------------------------
# formatting

def poly_to_str(p, var="a"):
    """Descending-power rendering, e.g. ``a^3+4a^2+8a+8`` or ``121/4a^3``."""
    if not p:
        return "0"
    parts = []
    for k, c in sorted(p.c.items(), reverse=True):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = to_str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{to_str(mag)}{mono}"
        parts.append((sign, body))
    head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return head + "".join(s + b for s, b in parts[1:])


def parse_poly(text, var="a"):
    """Inverse of :func:`poly_to_str`."""
    import re

    text = text.replace(" ", "")
    if text == "0":
        return apoly({})
    out = {}
    for sign, coeff, mono, exp in re.findall(
        rf"([+-]?)(\d+(?:/\d+)?)?({var}(?:\^(-?\d+))?)?", text
    ):
        if not coeff and not mono:
            continue
        c = Fraction(coeff) if coeff else Fraction(1)
        if sign == "-":
            c = -c
        k = (int(exp) if exp else 1) if mono else 0
        out[k] = out.get(k, 0) + c
    return apoly(out)


def poly_to_latex(p, var="a_\\tau"):
    if not p:
        return "0"
    parts = []
    for k, c in sorted(p.c.items(), reverse=True):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if mag.denominator == 1:
            num = "" if (mag == 1 and k) else str(mag.numerator)
        else:
            num = f"\\frac{{{mag.numerator}}}{{{mag.denominator}}}"
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{{{k}}}")
        parts.append((sign, num + mono))
    head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return head + "".join(f" {s} {b}" for s, b in parts[1:])


def latex_table(met):
    rows = ["\\begin{tabular}{|c|l|}", "\\hline", "$|q|^{2n}$ & $F_n$ \\\\", "\\hline"]
    for n, F in enumerate(met.F):
        tag = "1" if n == 0 else f"|q|^{{{2 * n}}}"
        rows.append(f"${tag}$ & ${poly_to_latex(F)}$ \\\\")
    rows += ["\\hline", "\\end{tabular}"]
    return "\n".join(rows)
