"""Arbitrary precision complex backend on top of mpmath.

Each precision gets its own ``MPContext`` so that no global precision is
ever touched. Truncated power series helpers here work on plain lists of
context numbers, index = power of the nilpotent variable.
"""

import os
from functools import lru_cache

import mpmath

DEFAULT_PREC = 256
MIN_PREC = 64


def default_prec():
    env = os.environ.get("QCOH_PREC")
    return int(env) if env else DEFAULT_PREC


@lru_cache(maxsize=None)
def _context(prec):
    ctx = mpmath.MPContext()
    ctx.prec = prec
    return ctx


def context(prec=None):
    prec = default_prec() if prec is None else int(prec)
    if prec < MIN_PREC:
        raise ValueError(f"precision must be at least {MIN_PREC} bits")
    return _context(prec)


def tolerance(ctx):
    """Default comparison tolerance 2^(-prec/2)."""
    return ctx.ldexp(ctx.mpf(1), -(ctx.prec // 2))


def to_json(ctx, x):
    x = cnum(ctx, x)
    digits = int(ctx.prec * 0.30103) + 2
    return {
        "re": ctx.nstr(x.real, digits, strip_zeros=False),
        "im": ctx.nstr(x.imag, digits, strip_zeros=False),
        "prec": ctx.prec,
    }


def from_json(obj):
    ctx = context(obj.get("prec"))
    return ctx.mpc(ctx.mpf(obj["re"]), ctx.mpf(obj["im"]))


def cnum(ctx, x):
    """Bring an int/Fraction/mpc into the context as a complex number."""
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, int):
        return ctx.mpc(ctx.mpf(x.numerator) / x.denominator)
    return ctx.mpc(x)


# --- truncated univariate series ---------------------------------------

def s_mul(a, b, n):
    out = [0] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if not x:
            continue
        for j, y in enumerate(b[: n + 1 - i]):
            out[i + j] += x * y
    return out


def s_exp(ctx, a, n):
    """exp of a series; a[0] may be nonzero."""
    a = list(a[: n + 1]) + [0] * max(0, n + 1 - len(a))
    out = [ctx.exp(a[0])] + [ctx.mpc(0)] * n
    # f' = a' f
    for k in range(1, n + 1):
        acc = ctx.mpc(0)
        for j in range(1, k + 1):
            acc += j * a[j] * out[k - j]
        out[k] = acc / k
    return out


def s_inv(ctx, a, n):
    """1/a for a series with a[0] != 0."""
    a = list(a[: n + 1]) + [0] * max(0, n + 1 - len(a))
    out = [ctx.mpc(0)] * (n + 1)
    out[0] = 1 / ctx.mpc(a[0])
    for k in range(1, n + 1):
        acc = ctx.mpc(0)
        for j in range(1, k + 1):
            acc += a[j] * out[k - j]
        out[k] = -acc * out[0]
    return out


def loggamma_shift(ctx, x, n):
    """Coefficients c_k (k>=1) with log G(x+e) - log G(x) = sum c_k e^k."""
    out = [ctx.mpc(0)] * (n + 1)
    for k in range(1, n + 1):
        out[k] = ctx.psi(k - 1, x) / ctx.factorial(k)
    return out


def gamma_series(ctx, x, n):
    """Taylor coefficients of Gamma(x+e) up to e^n (x not a pole)."""
    s = loggamma_shift(ctx, real(ctx, x), n)
    g = s_exp(ctx, s, n)
    gx = ctx.gamma(real(ctx, x))
    return [gx * c for c in g]


def rgamma_series(ctx, x, n):
    """Taylor coefficients of 1/Gamma(x+e) up to e^n; x may be a pole."""
    xf = real(ctx, x)
    if _is_nonpos_int(x):
        k = int(-x)
        # 1/G(-k+e) = prod_{j=0}^{k} (e - k + j) / G(1+e)
        poly = [ctx.mpc(1)]
        for j in range(k + 1):
            c = ctx.mpc(j - k)
            nxt = [ctx.mpc(0)] * (len(poly) + 1)
            for i, p in enumerate(poly):
                nxt[i] += p * c
                nxt[i + 1] += p
            poly = nxt
        return s_mul(poly, rgamma_series(ctx, 1, n), n)
    s = loggamma_shift(ctx, xf, n)
    g = s_exp(ctx, [-c for c in s], n)
    r = ctx.rgamma(xf)
    return [r * c for c in g]


def real(ctx, x):
    if hasattr(x, "denominator") and not isinstance(x, int):
        return ctx.mpf(x.numerator) / x.denominator
    return ctx.mpf(x)


def _is_nonpos_int(x):
    try:
        return int(x) == x and x <= 0
    except (TypeError, ValueError):
        return False
