"""Univariate rational functions over Q in a parameter t."""

from fractions import Fraction

from ..errors import NotConstant


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _add(a, b):
    n = max(len(a), len(b))
    return _trim(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def _mul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        f = a[-1] / lead
        q[k] = f
        for i, y in enumerate(b):
            a[i + k] -= f * y
        a = list(_trim(a))
    return _trim(q), _trim(a)


def _gcd(a, b):
    while b:
        a, b = b, _divmod(a, b)[1]
    return a


class RatFun:
    """num/den in t with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=(1,)):
        num = _trim(Fraction(x) for x in num)
        den = _trim(Fraction(x) for x in den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = (), (Fraction(1),)
            return
        g = _gcd(num, den)
        if len(g) > 1:
            num = _divmod(num, g)[0]
            den = _divmod(den, g)[0]
        lead = den[-1]
        self.num = tuple(x / lead for x in num)
        self.den = tuple(x / lead for x in den)

    @classmethod
    def const(cls, c):
        return cls((c,))

    @classmethod
    def monomial(cls, c, k):
        """c * t^k for any integer k."""
        if k >= 0:
            return cls((0,) * k + (c,))
        return cls((c,), (0,) * (-k) + (1,))

    def _coerce(self, other):
        return other if isinstance(other, RatFun) else RatFun.const(other)

    def __add__(self, other):
        o = self._coerce(other)
        return RatFun(_add(_mul(self.num, o.den), _mul(o.num, self.den)), _mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFun(tuple(-x for x in self.num), self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        o = self._coerce(other)
        return RatFun(_mul(self.num, o.num), _mul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if not o.num:
            raise ZeroDivisionError("division by zero rational function")
        return RatFun(_mul(self.num, o.den), _mul(self.den, o.num))

    def __eq__(self, other):
        o = self._coerce(other)
        return self.num == o.num and self.den == o.den

    def is_constant(self):
        return len(self.num) <= 1 and len(self.den) == 1

    def __repr__(self):
        return f"RatFun({list(map(str, self.num))}/{list(map(str, self.den))})"


def ratfun_constant_value(f):
    if not f.is_constant():
        raise NotConstant(
            "rational function is not constant", numerator=f.num, denominator=f.den
        )
    return f.num[0] if f.num else Fraction(0)
