"""Sparse Laurent polynomials in one formal variable over a generic ring.

Coefficients may be Fractions, mpmath numbers, or LaurentPoly objects in a
different variable (that is how the two-variable ring Q[a^±][z^±] is
built). Two polynomials only multiply as polynomials when they share the
same variable name; otherwise the other operand is treated as a scalar.
"""

from fractions import Fraction


class LaurentPoly:
    __slots__ = ("var", "c")

    def __init__(self, coeffs=None, var="z"):
        self.var = var
        if coeffs is None:
            self.c = {}
        else:
            self.c = {int(k): v for k, v in coeffs.items() if v}

    # construction -------------------------------------------------------
    @classmethod
    def monomial(cls, coeff, exp=0, var="z"):
        return cls({exp: coeff}, var)

    @classmethod
    def const(cls, coeff, var="z"):
        return cls({0: coeff}, var)

    def _wrap(self, other):
        if isinstance(other, LaurentPoly) and other.var == self.var:
            return other
        return LaurentPoly({0: other}, self.var)

    # queries ------------------------------------------------------------
    def __bool__(self):
        return bool(self.c)

    def __getitem__(self, k):
        return self.c.get(k, 0)

    def exponents(self):
        return sorted(self.c)

    def items(self):
        return sorted(self.c.items())

    def degree(self):
        return max(self.c) if self.c else None

    def valuation(self):
        return min(self.c) if self.c else None

    def is_constant(self):
        return all(k == 0 for k in self.c)

    def constant(self):
        return self.c.get(0, 0)

    def __eq__(self, other):
        if isinstance(other, LaurentPoly) and other.var == self.var:
            return self.c == other.c
        if not self.c:
            return not other
        return self.is_constant() and self.c[0] == other

    def __hash__(self):
        return hash((self.var, frozenset(self.c.items())))

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = self._wrap(other)
        out = dict(self.c)
        for k, v in other.c.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return _raw(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return _raw({k: -v for k, v in self.c.items()}, self.var)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if isinstance(other, LaurentPoly) and other.var == self.var:
            out = {}
            for i, x in self.c.items():
                for j, y in other.c.items():
                    k = i + j
                    p = x * y
                    if k in out:
                        out[k] = out[k] + p
                    else:
                        out[k] = p
            return LaurentPoly(out, self.var)
        if not other:
            return LaurentPoly({}, self.var)
        return LaurentPoly({k: v * other for k, v in self.c.items()}, self.var)

    def __rmul__(self, other):
        if not other:
            return LaurentPoly({}, self.var)
        return LaurentPoly({k: other * v for k, v in self.c.items()}, self.var)

    def __truediv__(self, scalar):
        if isinstance(scalar, int):
            scalar = Fraction(scalar)
        return LaurentPoly({k: v / scalar for k, v in self.c.items()}, self.var)

    def __pow__(self, n):
        if n < 0:
            if len(self.c) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (k, v), = self.c.items()
            return LaurentPoly({k * n: Fraction(1) / v ** (-n)}, self.var)
        out = LaurentPoly({0: 1}, self.var)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # transformations ----------------------------------------------------
    def shift(self, k):
        return _raw({e + k: v for e, v in self.c.items()}, self.var)

    def map(self, f):
        return LaurentPoly({k: f(v) for k, v in self.c.items()}, self.var)

    def invert_var(self, sign=1):
        """Substitute var -> sign/var."""
        if sign == 1:
            return _raw({-k: v for k, v in self.c.items()}, self.var)
        return _raw({-k: (-v if k % 2 else v) for k, v in self.c.items()}, self.var)

    def derivative_log(self):
        """var * d/dvar."""
        return LaurentPoly({k: k * v for k, v in self.c.items()}, self.var)

    def evaluate(self, x):
        acc = 0
        for k, v in self.c.items():
            acc = acc + v * x ** k
        return acc

    def __repr__(self):
        if not self.c:
            return "0"
        return " + ".join(f"({v})*{self.var}^{k}" for k, v in self.items())


def _raw(d, var):
    p = LaurentPoly.__new__(LaurentPoly)
    p.var = var
    p.c = d
    return p


def laurent_split(p):
    """Split into (exponents >= 1, exponents <= 0)."""
    pos = _raw({k: v for k, v in p.c.items() if k >= 1}, p.var)
    nonpos = _raw({k: v for k, v in p.c.items() if k <= 0}, p.var)
    return pos, nonpos
