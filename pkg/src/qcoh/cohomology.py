"""Cohomology rings of inertia sectors, localization integrals, orbifold pairing.

Each sector ring is Q[pbar_1..pbar_r'] modulo the ideal generated by the
products of Dbar_i over index sets I inside the fixing set whose
complement (inside the fixing set) is not an anticone. Elements are
stored as coefficient vectors over the standard-monomial basis of a
degrevlex Groebner basis; multiplication goes through exact structure
constants.
"""

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import factorial

from .errors import DegreeMismatch, DimensionMismatch, HardLefschetzFails, NotConstant, OracleMismatch
from .exact.groebner import from_linear_product, groebner, reduce, standard_monomials
from .exact.lattice import nullspace, rref
from .exact.ratfun import RatFun, ratfun_constant_value
from .exact.rational import to_str
from .toric import dot

PRIMES = [p for p in range(2, 98) if all(p % k for k in range(2, p))]


# ---------------------------------------------------------------------------
# sector rings

class SectorRing:
    def __init__(self, X, v):
        self.X = X
        self.sector = X.sectors[v] if isinstance(v, int) else v
        frame = X.frame
        self.nvars = frame.r_prime
        self.dbar = [frame.dbar_coords(i) for i in range(X.data.m)]
        F = self.sector.fixing
        gens = []
        for I in _minimal_forbidden(X.fan, F):
            if any(i in X.fan.extra for i in I):
                continue
            gens.append(from_linear_product([self.dbar[i] for i in I], self.nvars))
        self.ideal_generators = gens
        self.gb = groebner(gens)
        basis = standard_monomials(self.gb, self.nvars)
        if basis is None:
            raise OracleMismatch(f"sector {self.sector.index}: quotient ring is infinite")
        self.basis = tuple(basis)
        self.index = {e: k for k, e in enumerate(self.basis)}
        self.degrees = tuple(sum(e) for e in self.basis)  # complex degrees
        top = [k for k, d in enumerate(self.degrees) if d == self.sector.n_v]
        if len(top) != 1 or max(self.degrees) != self.sector.n_v:
            raise OracleMismatch(
                f"sector {self.sector.index}: top degree piece is not one-dimensional"
            )
        self.top_index = top[0]

    @property
    def dim(self):
        return len(self.basis)

    @property
    def n_v(self):
        return self.sector.n_v

    def real_degrees(self):
        return tuple(2 * d for d in self.degrees)

    # conversions
    def normal_form(self, poly):
        if any(len(e) != self.nvars for e in poly):
            raise DimensionMismatch(f"monomials must have {self.nvars} exponents")
        return reduce({e: Fraction(c) for e, c in poly.items() if c}, self.gb)

    def to_vector(self, poly):
        nf = self.normal_form(poly)
        vec = [Fraction(0)] * self.dim
        for e, c in nf.items():
            vec[self.index[e]] = c
        return vec

    def to_poly(self, vec):
        return {self.basis[k]: c for k, c in enumerate(vec) if c}

    def unit(self):
        return self.to_vector({(0,) * self.nvars: 1})

    def linear(self, coords):
        """Degree two class sum_a coords[a] * pbar_a."""
        poly = {}
        for a, c in enumerate(coords[: self.nvars]):
            if c:
                poly[tuple(int(b == a) for b in range(self.nvars))] = Fraction(c)
        return self.to_vector(poly)

    def divisor(self, i):
        return self.linear(self.dbar[i])

    @cached_property
    def table(self):
        """table[i][j] = normal form of basis_i * basis_j as a sparse dict."""
        out = []
        for ei in self.basis:
            row = []
            for ej in self.basis:
                e = tuple(a + b for a, b in zip(ei, ej))
                nf = self.normal_form({e: 1})
                row.append({self.index[k]: c for k, c in nf.items()})
            out.append(row)
        return out

    def mul(self, x, y):
        """Product of two coefficient vectors (any scalar ring)."""
        out = [0] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                ab = a * b
                for k, c in self.table[i][j].items():
                    out[k] += ab * c
        return out

    def homogeneous_parts(self, vec):
        parts = {}
        for k, c in enumerate(vec):
            if c:
                parts.setdefault(self.degrees[k], [0] * self.dim)[k] = c
        return parts

    def cup_matrix(self, vec):
        """Matrix (rows = output) of multiplication by vec."""
        cols = []
        for j in range(self.dim):
            e = [0] * self.dim
            e[j] = Fraction(1)
            cols.append(self.mul(vec, e))
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    @cached_property
    def top_integral(self):
        """Integral of the top standard monomial, by localization."""
        vec = [Fraction(0)] * self.dim
        vec[self.top_index] = Fraction(1)
        return integrate(self.X, self.sector.index, vec, ring=self)

    def integrate(self, vec):
        """Fast path: top coefficient times the cached top integral."""
        return vec[self.top_index] * self.top_integral


def _minimal_forbidden(fan, F):
    """Minimal I inside F with F minus I not an anticone."""
    F = sorted(F)
    found = []
    for k in range(0, len(F) + 1):
        for I in combinations(F, k):
            s = frozenset(I)
            if any(f <= s for f in found):
                continue
            if frozenset(F) - s not in fan.anticones:
                found.append(s)
    return [tuple(sorted(s)) for s in found]


def sector_ring(X, v):
    k = v.index if hasattr(v, "index") else v
    return X.cached(("ring", k), lambda: SectorRing(X, k))


# ---------------------------------------------------------------------------
# localization

def localization_frame(X, v, c):
    s = X.sectors[v]
    frame = X.frame
    pts = []
    for I in X.fan.top:
        if not set(I) <= s.fixing:
            continue
        ell = frame.ell_sigma[I]
        pbar = tuple(
            sum(c[i] * ell[i][a] for i in I) for a in range(frame.r_prime)
        )
        duals = _duals(X, I)
        weights = []
        for j in sorted(s.fixing - set(I)):
            w = sum(c[i] * dot(X.data.D[j], duals[i]) for i in I) - c[j]
            weights.append(w)
        pts.append((I, pbar, tuple(weights), X.fan.mult[I]))
    return pts


def _duals(X, I):
    from .toric import _top_cone_dual

    return X.cached(("dual", I), lambda: _top_cone_dual(X.data, I))


def _draw(rng, m):
    return tuple(rng.sample(PRIMES, m))


def _localize(X, ring, vec, c):
    """Sum over fixed points as a RatFun in t, per homogeneous degree."""
    pts = localization_frame(X, ring.sector.index, c)
    total = RatFun.const(0)
    for I, pbar, weights, order in pts:
        if any(w == 0 for w in weights):
            return None
        euler = Fraction(order)
        for w in weights:
            euler *= w
        val = Fraction(0)
        for k, coeff in enumerate(vec):
            if not coeff:
                continue
            mono = Fraction(1)
            for a, e in enumerate(ring.basis[k]):
                mono *= pbar[a] ** e
            val += coeff * mono
        if val:
            deg = ring.degrees[next(k for k, x in enumerate(vec) if x)]
            total = total + RatFun.monomial(val / euler, deg - len(weights))
    return total


def integrate(X, v, vec, seed=0, ring=None, strict=False):
    """Integral over the sector X_v of a class (vector over the standard basis).

    Each homogeneous part is localized separately with lambda_i = c_i t;
    parts below the top degree must sum to zero, the top part to a constant.
    The answer is confirmed with a second random direction.
    """
    ring = ring or sector_ring(X, v)
    if isinstance(vec, dict):
        vec = ring.to_vector(vec)
    parts = ring.homogeneous_parts(vec)
    if strict and any(d != ring.n_v for d in parts):
        raise DegreeMismatch(
            f"class has components in degrees {sorted(2 * d for d in parts)}, "
            f"expected only {2 * ring.n_v}"
        )
    rng = random.Random(seed)
    m = X.data.m
    results = []
    attempts = 0
    while len(results) < 2:
        attempts += 1
        if attempts > 6:
            raise NotConstant("localization failed to produce two generic directions")
        c = _draw(rng, m)
        value = Fraction(0)
        ok = True
        for d, part in parts.items():
            f = _localize(X, ring, part, c)
            if f is None:
                ok = False
                break
            if d == ring.n_v:
                value += ratfun_constant_value(f)
            elif f != RatFun.const(0):
                raise NotConstant(
                    f"degree {2 * d} part does not integrate to zero",
                    numerator=f.num, denominator=f.den,
                )
        if ok:
            results.append(value)
    if results[0] != results[1]:
        raise OracleMismatch("localization depends on the direction", values=results)
    return results[0]


# ---------------------------------------------------------------------------
# orbifold classes

class OrbClass:
    """Sector-graded class: {sector index: coefficient vector}."""

    __slots__ = ("X", "parts")

    def __init__(self, X, parts):
        self.X = X
        self.parts = {}
        for v, vec in parts.items():
            vec = list(vec)
            if any(vec):
                self.parts[v] = vec

    @classmethod
    def zero(cls, X):
        return cls(X, {})

    @classmethod
    def unit(cls, X, v=0):
        return cls(X, {v: sector_ring(X, v).unit()})

    @classmethod
    def from_poly(cls, X, v, poly):
        return cls(X, {v: sector_ring(X, v).to_vector(poly)})

    def ring(self, v):
        return sector_ring(self.X, v)

    def __getitem__(self, v):
        return self.parts.get(v) or [0] * self.ring(v).dim

    def __add__(self, other):
        keys = set(self.parts) | set(other.parts)
        return OrbClass(self.X, {v: [a + b for a, b in zip(self[v], other[v])] for v in keys})

    def __neg__(self):
        return OrbClass(self.X, {v: [-a for a in vec] for v, vec in self.parts.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        return OrbClass(self.X, {v: [s * a for a in vec] for v, vec in self.parts.items()})

    def cup(self, other):
        """Sector-wise product (not the orbifold product)."""
        return OrbClass(
            self.X,
            {v: self.ring(v).mul(vec, other[v]) for v, vec in self.parts.items() if v in other.parts},
        )

    def map(self, f):
        return OrbClass(self.X, {v: [f(a) for a in vec] for v, vec in self.parts.items()})

    def inv_star(self):
        """Pull back along the involution of the inertia stack."""
        S = self.X.sectors
        return OrbClass(self.X, {S[v].inv: list(vec) for v, vec in self.parts.items()})

    def orbifold_degrees(self):
        """Shifted real degrees deg + 2*age present in the class."""
        out = set()
        for v, vec in self.parts.items():
            ring = self.ring(v)
            for k, c in enumerate(vec):
                if c:
                    out.add(2 * ring.degrees[k] + 2 * self.X.sectors[v].age)
        return out

    def to_json(self):
        out = []
        for v, vec in sorted(self.parts.items()):
            ring = self.ring(v)
            coeffs = {}
            for k, c in enumerate(vec):
                if c:
                    coeffs[_mono_str(ring.basis[k])] = to_str(c) if isinstance(c, (int, Fraction)) else str(c)
            out.append({"sector": v, "coeffs": coeffs})
        return out

    @classmethod
    def from_json(cls, X, obj):
        """Inverse of :meth:`to_json` for exact classes."""
        parts = {}
        for entry in obj:
            ring = sector_ring(X, entry["sector"])
            text = "+".join(f"{c}*{m}" for m, c in entry["coeffs"].items())
            parts[entry["sector"]] = parse_class(ring, text.replace("+-", "-")) if text else ring.to_vector({})
        return cls(X, parts)

    def __eq__(self, other):
        keys = set(self.parts) | set(other.parts)
        return all(list(self[v]) == list(other[v]) for v in keys)


def _mono_str(e):
    parts = []
    for a, k in enumerate(e):
        if k == 1:
            parts.append(f"p{a + 1}")
        elif k > 1:
            parts.append(f"p{a + 1}^{k}")
    return "*".join(parts) or "1"


def poincare_pairing(a, b, seed=0):
    """(a, b)_orb = sum_v integral over X_v of a_v * b_inv(v)."""
    X = a.X
    total = Fraction(0)
    for v, vec in a.parts.items():
        w = X.sectors[v].inv
        if w not in b.parts:
            continue
        ring = sector_ring(X, v)
        total += integrate(X, v, ring.mul(vec, b.parts[w]), seed=seed, ring=ring)
    return total


def pairing_gram(X):
    """Gram matrix of the orbifold pairing over the basis of all sectors."""
    basis = []
    for s in X.sectors:
        ring = sector_ring(X, s.index)
        for k in range(ring.dim):
            e = [Fraction(0)] * ring.dim
            e[k] = Fraction(1)
            basis.append(OrbClass(X, {s.index: e}))
    return [[poincare_pairing(x, y) for y in basis] for x in basis]


# ---------------------------------------------------------------------------
# Lefschetz sl2

@dataclass(frozen=True)
class Sl2Triple:
    a: list
    a_dag: list
    h: list
    lemma_checks: tuple  # (k, j, expected coefficient, verified)


def _matmul(A, B):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*B)] for row in A]


def _matsub(A, B):
    return [[x - y for x, y in zip(r, s)] for r, s in zip(A, B)]


def _matexp_nilpotent(A):
    n = len(A)
    out = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    term = [row[:] for row in out]
    for k in range(1, n + 1):
        term = [[x / k for x in row] for row in _matmul(term, A)]
        out = [[x + y for x, y in zip(r, s)] for r, s in zip(out, term)]
    return out


def lefschetz_sl2(ring, omega):
    """sl2 triple (a, a_dagger, h) for cup product with the degree two class omega."""
    n = ring.dim
    nv = ring.n_v
    A = ring.cup_matrix(omega)
    h = [[Fraction(2 * ring.degrees[i] - nv) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    # hard Lefschetz: a^(nv - 2q) : H^{2q} -> H^{2nv - 2q} invertible
    for q in range(0, nv // 2 + 1):
        src = [k for k in range(n) if ring.degrees[k] == q]
        dst = [k for k in range(n) if ring.degrees[k] == nv - q]
        if len(src) != len(dst):
            raise HardLefschetzFails("graded pieces do not match")
        P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for _ in range(nv - 2 * q):
            P = _matmul(A, P)
        block = [[P[i][j] for j in src] for i in dst]
        if block and len(rref(block)[1]) != len(src):
            raise HardLefschetzFails(f"omega^{nv - 2 * q} is not an isomorphism on degree {2 * q}")
    # unknowns: entries X[i][j] with degree(i) = degree(j) - 1
    slots = [(i, j) for i in range(n) for j in range(n) if ring.degrees[i] == ring.degrees[j] - 1]
    rows = []
    for p in range(n):
        for q in range(n):
            # ([A, X])_{pq} = sum_k A_pk X_kq - X_pk A_kq
            row = [Fraction(0)] * (len(slots) + 1)
            for s, (i, j) in enumerate(slots):
                if j == q:
                    row[s] += A[p][i]
                if i == p:
                    row[s] -= A[j][q]
            row[-1] = h[p][q]
            rows.append(row)
    R, piv = rref(rows)
    if len(slots) in piv:
        raise HardLefschetzFails("no a_dagger solves [a, a_dagger] = h")
    if len(piv) != len(slots):
        raise HardLefschetzFails("a_dagger is not unique")
    Xd = [[Fraction(0)] * n for _ in range(n)]
    for r_i, col in enumerate(piv):
        i, j = slots[col]
        Xd[i][j] = R[r_i][-1]
    # relations
    comm = lambda P, Q: _matsub(_matmul(P, Q), _matmul(Q, P))
    two = lambda M, s: [[s * x for x in row] for row in M]
    if comm(A, Xd) != h or comm(h, A) != two(A, 2) or comm(h, Xd) != two(Xd, -2):
        raise OracleMismatch("sl2 relations fail")
    E = _matmul(_matexp_nilpotent(two(A, -1)), _matexp_nilpotent(Xd))
    checks = []
    for k in range(0, nv + 1):
        for j in range(0, nv + 1):
            deg_phi = nv - k - 2 * j  # real degree of the primitive class
            if deg_phi < 0 or deg_phi % 2:
                continue
            src = [i for i in range(n) if 2 * ring.degrees[i] == deg_phi]
            if not src:
                continue
            Pk = [[Fraction(int(i == jj)) for jj in range(n)] for i in range(n)]
            for _ in range(k + 2 * j + 1):
                Pk = _matmul(A, Pk)
            block = [[Pk[i][s] for s in src] for i in range(n)]
            for phi_local in _kernel(block):
                phi = [Fraction(0)] * n
                for s, x in zip(src, phi_local):
                    phi[s] = x
                u = phi
                for _ in range(j):
                    u = _apply(A, u)
                if not any(u):
                    continue
                Eu = _apply(E, u)
                lead = u
                for _ in range(k):
                    lead = _apply(A, lead)
                coeff = Fraction((-1) ** (k + j) * factorial(j), factorial(k + j))
                top = [Eu[i] if 2 * ring.degrees[i] == nv + k else 0 for i in range(n)]
                above = any(Eu[i] for i in range(n) if 2 * ring.degrees[i] > nv + k)
                ok = (not above) and all(t == coeff * l for t, l in zip(top, lead))
                checks.append((k, j, coeff, ok))
    return Sl2Triple(A, Xd, h, tuple(checks))


def _apply(M, v):
    return [sum(x * y for x, y in zip(row, v)) for row in M]


def _kernel(M):
    if not M or not M[0]:
        return []
    return nullspace(M)


def parse_class(ring, text):
    """Polynomial in p1..pr such as '1/2*p1^2 - p1*p2' as a vector over the ring basis."""
    poly = {}
    s = text.replace(" ", "")
    if s and s[0] not in "+-":
        s = "+" + s
    for sign, body in re.findall(r"([+-])([^+-]+)", s):
        coeff = Fraction(1)
        expo = [0] * ring.nvars
        for factor in body.split("*"):
            m = re.fullmatch(r"p(\d+)(?:\^(\d+))?", factor)
            if m:
                a = int(m.group(1)) - 1
                if not 0 <= a < ring.nvars:
                    raise DimensionMismatch(f"no generator {factor} (have p1..p{ring.nvars})")
                expo[a] += int(m.group(2) or 1)
            else:
                coeff *= Fraction(factor)
        key = tuple(expo)
        poly[key] = poly.get(key, Fraction(0)) + (coeff if sign == "+" else -coeff)
    return ring.to_vector(poly)
