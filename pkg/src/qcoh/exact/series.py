"""Truncated series in two commuting variables (q, qbar), plus small matrices.

A BiSeries is truncated either by total degree (``order``), by a box
``(N, M)`` meaning n <= N and m <= M, or by both. Products keep the
tighter of the two operands' bounds, so truncation never fabricates terms.
"""


class Mat:
    """Dense square or rectangular matrix over any ring supporting + and *."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = tuple(tuple(r) for r in rows)

    @classmethod
    def identity(cls, n, one=1, zero=0):
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n, m=None, zero=0):
        return cls([[zero] * (n if m is None else m) for _ in range(n)])

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __bool__(self):
        return any(bool(x) for r in self.rows for x in r)

    def __eq__(self, other):
        if isinstance(other, Mat):
            return all(x == y for r, s in zip(self.rows, other.rows) for x, y in zip(r, s))
        if not other:
            return not self
        return NotImplemented

    def __add__(self, other):
        if not isinstance(other, Mat):
            if not other:
                return self
            raise TypeError("matrix + scalar")
        return Mat([[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    __radd__ = __add__

    def __neg__(self):
        return Mat([[-x for x in r] for r in self.rows])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Mat):
            cols = list(zip(*other.rows))
            out = []
            for r in self.rows:
                row = []
                for c in cols:
                    acc = 0
                    for x, y in zip(r, c):
                        if x and y:
                            acc = acc + x * y
                    row.append(acc)
                out.append(row)
            return Mat(out)
        return Mat([[x * other for x in r] for r in self.rows])

    def __rmul__(self, other):
        return Mat([[other * x for x in r] for r in self.rows])

    def map(self, f):
        return Mat([[f(x) for x in r] for r in self.rows])

    def transpose(self):
        return Mat(zip(*self.rows))

    def __repr__(self):
        return f"Mat({[list(r) for r in self.rows]!r})"


class BiSeries:
    __slots__ = ("c", "order", "box")

    def __init__(self, coeffs=None, order=None, box=None):
        if order is None and box is None:
            raise ValueError("a BiSeries needs a truncation bound")
        self.order = order
        self.box = tuple(box) if box is not None else None
        self.c = {}
        for (n, m), v in (coeffs or {}).items():
            if n < 0 or m < 0:
                raise ValueError("bidegrees must be non-negative")
            if v and self.keeps(n, m):
                self.c[(n, m)] = v

    def keeps(self, n, m):
        if self.order is not None and n + m > self.order:
            return False
        if self.box is not None and (n > self.box[0] or m > self.box[1]):
            return False
        return True

    def _bounds(self, other):
        order = _min(self.order, other.order)
        if self.box is None:
            box = other.box
        elif other.box is None:
            box = self.box
        else:
            box = (min(self.box[0], other.box[0]), min(self.box[1], other.box[1]))
        return order, box

    def _new(self, coeffs, order=None, box=None):
        s = BiSeries.__new__(BiSeries)
        s.order = order
        s.box = box
        s.c = coeffs
        return s

    # queries
    def __getitem__(self, nm):
        return self.c.get(tuple(nm), 0)

    def __bool__(self):
        return bool(self.c)

    def bidegrees(self):
        return sorted(self.c)

    def items(self):
        return sorted(self.c.items())

    def __eq__(self, other):
        if isinstance(other, BiSeries):
            order, box = self._bounds(other)
            keys = set(self.c) | set(other.c)
            return all(
                self[k] == other[k] for k in keys if _keeps(order, box, *k)
            )
        return NotImplemented

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, BiSeries):
            return self + self.scalar(other)
        order, box = self._bounds(other)
        out = {k: v for k, v in self.c.items() if _keeps(order, box, *k)}
        for k, v in other.c.items():
            if not _keeps(order, box, *k):
                continue
            s = out[k] + v if k in out else v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return self._new(out, order, box)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -v for k, v in self.c.items()}, self.order, self.box)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, BiSeries):
            return self._new(
                {k: v * other for k, v in self.c.items() if v * other}, self.order, self.box
            )
        order, box = self._bounds(other)
        out = {}
        for (n1, m1), x in self.c.items():
            for (n2, m2), y in other.c.items():
                k = (n1 + n2, m1 + m2)
                if not _keeps(order, box, *k):
                    continue
                p = x * y
                out[k] = out[k] + p if k in out else p
        return self._new({k: v for k, v in out.items() if v}, order, box)

    def __rmul__(self, other):
        return self._new(
            {k: other * v for k, v in self.c.items() if other * v}, self.order, self.box
        )

    def scalar(self, value):
        return self._new({(0, 0): value} if value else {}, self.order, self.box)

    def map(self, f):
        out = {}
        for k, v in self.c.items():
            w = f(v)
            if w:
                out[k] = w
        return self._new(out, self.order, self.box)

    def swap(self, f=None):
        """Exchange the roles of q and qbar, optionally mapping coefficients."""
        box = (self.box[1], self.box[0]) if self.box is not None else None
        out = {}
        for (n, m), v in self.c.items():
            w = f(v) if f else v
            if w:
                out[(m, n)] = w
        return self._new(out, self.order, box)

    def inverse(self, one):
        """Multiplicative inverse when the constant term equals ``one``.

        Works for noncommutative coefficients (matrices) because the
        constant term is the identity.
        """
        if self[(0, 0)] != one:
            raise ValueError("inverse needs constant term equal to one")
        x = self - self.scalar(one)  # nilpotent part
        acc = self.scalar(one)
        power = self.scalar(one)
        sign = 1
        bound = self.order if self.order is not None else sum(self.box)
        for _ in range(bound):
            power = power * x
            sign = -sign
            if not power:
                break
            acc = acc + (power if sign > 0 else -power)
        return acc

    def truncate(self, order=None, box=None):
        order = _min(self.order, order)
        if box is not None and self.box is not None:
            box = (min(box[0], self.box[0]), min(box[1], self.box[1]))
        elif box is None:
            box = self.box
        return self._new({k: v for k, v in self.c.items() if _keeps(order, box, *k)}, order, box)

    def __repr__(self):
        return f"BiSeries({dict(self.items())!r}, order={self.order}, box={self.box})"


def _min(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _keeps(order, box, n, m):
    if order is not None and n + m > order:
        return False
    if box is not None and (n > box[0] or m > box[1]):
        return False
    return True
