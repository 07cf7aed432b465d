"""Combinatorics of a toric orbifold given by divisor classes and a stability vector.

Input is an m x r integer matrix whose rows D_1..D_m live in the dual of a
rank r lattice L, plus a rational vector eta. Indices are 0-based and kept
in the user's order; genuine rays versus extra (box) vectors are recorded
as index sets instead of being renumbered.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import ceil, factorial, floor, prod
from pathlib import Path

from .errors import (
    EmptyStack,
    EtaNotGeneric,
    InfiniteStabilizer,
    InputError,
    NonNefBasis,
    NotCompact,
    OracleMismatch,
)
from .exact.lattice import det, inverse, rank, snf, solve
from .exact.lp import cone_member, linprog_max
from .exact.polytope import lattice_volume
from .exact.rational import Q, frac, to_str

FIXTURE_DIR = Path(__file__).parent / "fixtures"


def dot(u, v):
    return sum(Fraction(a) * b for a, b in zip(u, v))


# ---------------------------------------------------------------------------
# input

@dataclass(frozen=True)
class StackyData:
    D: tuple
    eta: tuple
    name: str = ""
    nef_basis: tuple = None

    def __post_init__(self):
        D = tuple(tuple(int(x) for x in row) for row in self.D)
        if not D or not D[0]:
            raise InputError("divisor matrix must be nonempty")
        if any(len(row) != len(D[0]) for row in D):
            raise InputError("divisor rows have different lengths")
        eta = tuple(Q(x) for x in self.eta)
        if len(eta) != len(D[0]):
            raise InputError(f"eta has length {len(eta)}, expected rank {len(D[0])}")
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "eta", eta)
        if self.nef_basis is not None:
            nb = tuple(tuple(int(x) for x in p) for p in self.nef_basis)
            object.__setattr__(self, "nef_basis", nb)

    @property
    def r(self):
        return len(self.D[0])

    @property
    def m(self):
        return len(self.D)

    @property
    def n(self):
        return self.m - self.r

    @classmethod
    def from_json(cls, obj):
        try:
            rank_ = int(obj["rank"])
            D = obj["divisors"]
            eta = obj["eta"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed toric input: {exc}") from exc
        if any(isinstance(x, float) for row in D for x in row) or any(
            isinstance(x, float) for x in eta
        ):
            raise InputError("floats are not accepted; use integers or 'p/q' strings")
        data = cls(D, eta, obj.get("name", ""), obj.get("nef_basis"))
        if data.r != rank_:
            raise InputError(f"rank {rank_} does not match divisor width {data.r}")
        return data

    def to_json(self):
        out = {
            "rank": self.r,
            "divisors": [list(row) for row in self.D],
            "eta": [to_str(x) for x in self.eta],
        }
        if self.name:
            out["name"] = self.name
        if self.nef_basis is not None:
            out["nef_basis"] = [list(p) for p in self.nef_basis]
        return out


def load(source):
    """Read StackyData from a path, or from a shipped fixture name like ``"p1"``."""
    if isinstance(source, StackyData):
        return source
    path = Path(source)
    if not path.exists():
        candidate = FIXTURE_DIR / f"{source}.toric.json"
        if not candidate.exists():
            raise InputError(f"no such file or fixture: {source}")
        path = candidate
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    return StackyData.from_json(obj)


# ---------------------------------------------------------------------------
# fan

@dataclass(frozen=True)
class FanStructure:
    data: StackyData
    anticones: frozenset
    top: tuple  # minimal anticones (size r), sorted
    mult: dict
    torsion: tuple  # invariant factors > 1 of N
    n: int  # free rank of N
    b: tuple  # b_i in N: torsion coordinates then free coordinates
    genuine: tuple  # i with {all}\{i} an anticone
    extra: tuple
    snf_U: tuple = field(repr=False)
    snf_diag: tuple = field(repr=False, default=())

    @property
    def m_prime(self):
        return len(self.genuine)

    @property
    def order_tor(self):
        return prod(self.torsion) if self.torsion else 1

    @property
    def permutation(self):
        """Input indices listed genuine rays first, then extra vectors."""
        return self.genuine + self.extra

    def b_free(self, i):
        return self.b[i][len(self.torsion):]

    def is_anticone(self, I):
        return frozenset(I) in self.anticones


def _is_anticone(data, I):
    return cone_member(data.eta, [data.D[i] for i in I], "open")


def validate(data):
    """Check conditions (A), (B), (C) and genericity; build the stacky fan."""
    m, r = data.m, data.r
    if rank(data.D) != r:
        raise InfiniteStabilizer("divisor classes do not span the dual lattice")
    anticones = frozenset(
        frozenset(I)
        for k in range(1, m + 1)
        for I in combinations(range(m), k)
        if _is_anticone(data, I)
    )
    if frozenset(range(m)) not in anticones:
        raise EmptyStack("eta is not a positive combination of all divisor classes")
    # checked before (B): a non-spanning anticone always means eta is on a wall
    # eta must avoid every cone spanned by fewer than r classes
    for k in range(0, r):
        for J in combinations(range(m), k):
            if cone_member(data.eta, [data.D[j] for j in J], "closed"):
                raise EtaNotGeneric(
                    f"eta lies on the wall spanned by {sorted(J)}", wall=sorted(J)
                )
    for I in anticones:
        if rank([data.D[i] for i in I]) != r:
            raise InfiniteStabilizer(f"anticone {sorted(I)} does not span", anticone=sorted(I))
    # (C): sum c_i D_i = 0 with c >= 0 forces c = 0
    A_eq = [[Fraction(data.D[i][a]) for i in range(m)] for a in range(r)] + [[1] * m]
    status, _, witness = linprog_max([0] * m, A_eq, [0] * r + [1])
    if status != "infeasible":
        raise NotCompact(
            "a nonzero non-negative relation among the divisor classes exists",
            relation=[to_str(x) for x in witness],
        )
    top = tuple(sorted(tuple(sorted(I)) for I in anticones if len(I) == r))
    mult = {I: abs(int(det([data.D[i] for i in I]))) for I in top}
    dec = snf([list(row) for row in data.D])
    diag = dec.diagonal
    tors_idx = [k for k, d in enumerate(diag) if d > 1]
    torsion = tuple(diag[k] for k in tors_idx)
    U = dec.U
    b = []
    for i in range(m):
        col = [U[k][i] for k in range(m)]
        tors = tuple(col[k] % diag[k] for k in tors_idx)
        b.append(tors + tuple(col[r:]))
    full = frozenset(range(m))
    genuine = tuple(i for i in range(m) if full - {i} in anticones)
    extra = tuple(i for i in range(m) if i not in genuine)
    return FanStructure(
        data=data,
        anticones=anticones,
        top=top,
        mult=mult,
        torsion=torsion,
        n=m - r,
        b=tuple(b),
        genuine=genuine,
        extra=extra,
        snf_U=U,
        snf_diag=tuple(diag),
    )


# ---------------------------------------------------------------------------
# Box

@dataclass(frozen=True)
class BoxSector:
    index: int
    d: tuple  # representative in [0,1)^r, coordinates in L (x) Q
    v: tuple  # element of N
    age: Fraction
    fixing: frozenset
    n_v: int
    inv: int

    @property
    def is_untwisted(self):
        return all(x == 0 for x in self.d)


def box(fan):
    """All sectors, untwisted first, then by (age, representative)."""
    D = fan.data.D
    r, m = fan.data.r, fan.data.m
    reps = {}
    for I in fan.top:
        dec = snf([list(D[i]) for i in I])
        e = dec.diagonal
        V = dec.V
        for js in product(*(range(x) for x in e)):
            y = [Fraction(j, x) for j, x in zip(js, e)]
            d = tuple(frac(sum(V[a][k] * y[k] for k in range(r))) for a in range(r))
            reps.setdefault(d, None)
    keys = sorted(reps, key=lambda d: (any(d), _age(D, d), d))
    index = {d: k for k, d in enumerate(keys)}
    sectors = []
    for d in keys:
        fixing = frozenset(i for i in range(m) if dot(D[i], d).denominator == 1)
        if fixing not in fan.anticones:
            raise OracleMismatch(f"box representative {d} has a non-anticone fixing set")
        inv = tuple(frac(-x) for x in d)
        sectors.append(
            BoxSector(
                index=index[d],
                d=d,
                v=_box_v(fan, d),
                age=_age(D, d),
                fixing=fixing,
                n_v=len(fixing) - r,
                inv=index[inv],
            )
        )
    return tuple(sectors)


def _age(D, d):
    return sum((frac(-dot(row, d)) for row in D), Fraction(0))


def _box_v(fan, d):
    """v(d) = sum ceil(<D_i, d>) b_i, in SNF coordinates of N."""
    D = fan.data.D
    m, r = fan.data.m, fan.data.r
    coeff = [ceil(dot(D[i], d)) for i in range(m)]
    U = fan.snf_U
    col = [sum(U[k][i] * coeff[i] for i in range(m)) for k in range(m)]
    diag = fan.snf_diag
    tors = tuple(col[k] % diag[k] for k in range(r) if diag[k] > 1)
    return tors + tuple(col[r:])


def age_of_line_bundle(fan, xi, v):
    """f_v(xi) = {-<xi, d>} for the stored representative d of v."""
    return frac(-dot(xi, v.d))


# ---------------------------------------------------------------------------
# nef frame

@dataclass(frozen=True)
class NefFrame:
    p: tuple  # basis of the dual lattice, rows
    m_mat: tuple  # D_i = sum_a m_ia p_a
    ell: tuple  # p_a = sum_i D_i ell_ia (rational splitting)
    r_prime: int
    c: dict  # c[j][i] for extra j, genuine i
    I_j: dict
    Dvee: dict  # D_j^vee in L (x) Q for extra j
    Dbar: tuple  # Dbar_i in dual lattice (x) Q
    rho_hat: tuple
    rho: tuple  # coordinates rho_a
    ell_sigma: dict  # top cone -> {i: tuple over a}

    def dbar_coords(self, i):
        """Dbar_i = sum_{a < r'} m_ia pbar_a (zero for extra vectors)."""
        return tuple(self.m_mat[i][: self.r_prime])


def _top_cone_dual(data, I):
    """ell_i^sigma: vectors in L (x) Q with <D_k, ell_i> = delta_ki for k in I."""
    DI = [list(data.D[i]) for i in I]
    inv = inverse(DI)  # columns are the dual basis
    return {i: tuple(inv[a][k] for a in range(data.r)) for k, i in enumerate(I)}


def _closed_ctilde(fan, x):
    D = fan.data.D
    return all(cone_member(x, [D[i] for i in I], "closed") for I in fan.top)


def _splitting_data(fan):
    """c_{ji}, I_j and D_j^vee for each extra index j."""
    data = fan.data
    c, I_j, Dvee = {}, {}, {}
    for j in fan.extra:
        for I in fan.top:
            if j not in I:
                continue
            dual = _top_cone_dual(data, I)
            dv = dual[j]
            cj = {i: -dot(data.D[i], dv) for i in range(data.m) if i not in I}
            if all(x >= 0 for x in cj.values()):
                c[j] = {i: cj.get(i, Fraction(0)) for i in fan.genuine}
                I_j[j] = I
                Dvee[j] = dv
                break
        else:
            raise OracleMismatch(f"extra vector {j} lies in no cone of the fan")
    return c, I_j, Dvee


def _find_basis(fan, extra_cands, main_cands, rho_hat, prefer_rho):
    r = fan.data.r
    k_extra = len(fan.extra)
    r_prime = r - k_extra

    def rho_ok(P):
        if not prefer_rho:
            return True
        coords = solve([list(col) for col in zip(*P)], list(rho_hat))
        return all(x >= 0 for x in coords)

    for extra_part in combinations(extra_cands, k_extra):
        if k_extra and rank([list(v) for v in extra_part]) < k_extra:
            continue
        for main_part in combinations(main_cands, r_prime):
            P = list(main_part) + list(extra_part)
            if abs(det(P)) != 1:
                continue
            if rho_ok(P):
                return tuple(P)
    return None


def nef_frame(fan, basis=None, splitting_cone=None):
    """Integral nef basis, the matrices m and ell, and the splitting data.

    ``basis`` overrides the search (it is validated). ``splitting_cone``
    selects which top cone defines the rational splitting ell.
    """
    data = fan.data
    r, m = data.r, data.m
    c, I_j, Dvee = _splitting_data(fan)
    r_prime = r - len(fan.extra)
    rho_hat = tuple(sum(data.D[i][a] for i in range(m)) for a in range(r))
    basis = basis if basis is not None else data.nef_basis
    extra_gens = [data.D[j] for j in fan.extra]
    if basis is None:
        found = None
        for B in range(1, 6):
            cands = [
                v for v in product(range(-B, B + 1), repeat=r)
                if any(v) and _closed_ctilde(fan, v)
            ]
            cands.sort(key=lambda v: (sum(abs(x) for x in v), tuple(-x for x in v)))
            extra_cands = [v for v in cands if cone_member(v, extra_gens, "closed")]
            main_cands = [v for v in cands if v not in extra_cands] + extra_cands
            for prefer in (True, False):
                found = _find_basis(fan, extra_cands, main_cands, rho_hat, prefer)
                if found:
                    break
            if found:
                break
        if found is None:
            raise NonNefBasis("no integral nef basis found in the search box")
        basis = found
    else:
        basis = tuple(tuple(int(x) for x in p) for p in basis)
        if len(basis) != r or abs(det(basis)) != 1:
            raise NonNefBasis("supplied basis is not a lattice basis")
        if not all(_closed_ctilde(fan, p) for p in basis):
            raise NonNefBasis("supplied basis vector is outside the closed extended Kaehler cone")
        if any(not cone_member(p, extra_gens, "closed") for p in basis[r_prime:]):
            raise NonNefBasis("trailing basis vectors must lie in the cone of extra classes")
    Pinv = inverse([list(p) for p in basis])
    m_mat = tuple(
        tuple(int(sum(data.D[i][b] * Pinv[b][a] for b in range(r))) for a in range(r))
        for i in range(m)
    )
    # splitting: p_a = sum_{i in I} D_i ell_ia for a chosen top cone
    I0 = splitting_cone or fan.top[0]
    ell_sigma = {}
    for I in fan.top:
        dual = _top_cone_dual(data, I)
        ell_sigma[I] = {i: tuple(dot(basis[a], dual[i]) for a in range(r)) for i in I}
    ell = tuple(
        ell_sigma[tuple(I0)].get(i, tuple(Fraction(0) for _ in range(r))) for i in range(m)
    )
    Dbar = []
    for i in range(m):
        if i in fan.extra:
            Dbar.append(tuple(Fraction(0) for _ in range(r)))
        else:
            v = [Fraction(x) for x in data.D[i]]
            for j in fan.extra:
                v = [x + c[j][i] * y for x, y in zip(v, data.D[j])]
            Dbar.append(tuple(v))
    rho = tuple(sum(m_mat[i][a] for i in range(m)) for a in range(r))
    return NefFrame(
        p=tuple(basis),
        m_mat=m_mat,
        ell=ell,
        r_prime=r_prime,
        c=c,
        I_j=I_j,
        Dvee=Dvee,
        Dbar=tuple(Dbar),
        rho_hat=rho_hat,
        rho=rho,
        ell_sigma=ell_sigma,
    )


def weak_fano_check(fan, frame):
    data = fan.data
    hrho_in = _closed_ctilde(fan, frame.rho_hat)
    ages = {j: sum(frame.c[j].values(), Fraction(0)) for j in fan.extra}
    rho_h2 = list(Fraction(x) for x in frame.rho_hat)
    for j in fan.extra:
        w = dot(frame.rho_hat, frame.Dvee[j])
        rho_h2 = [x - w * y for x, y in zip(rho_h2, data.D[j])]
    rho_nef = _closed_ctilde(fan, rho_h2)
    consistent = hrho_in == (rho_nef and all(a <= 1 for a in ages.values()))
    if not consistent:
        raise OracleMismatch("weak Fano lemma violated: inconsistent cone decisions")
    return {
        "hrho_in_cl_Ctilde": hrho_in,
        "rho_nef": rho_nef,
        "ages_of_bj": [ages[j] for j in fan.extra],
    }


# ---------------------------------------------------------------------------
# effective classes

def keff_enumerate(fan, frame, bound, sectors=None):
    """Classes d in K_eff with sum_a <p_a, d> <= bound, tagged with their sector."""
    data = fan.data
    bound = Q(bound)
    sectors = sectors if sectors is not None else box(fan)
    by_key = {s.d: s for s in sectors}
    found = {}
    for I in fan.top:
        dual = _top_cone_dual(data, I)
        weights = []
        for i in I:
            w = [dot(p, dual[i]) for p in frame.p]
            if any(x < 0 for x in w):
                raise NonNefBasis(f"<p_a, ell_{i}> < 0 on cone {I}")
            if sum(w) == 0:
                raise NonNefBasis(f"zero weight direction {i} on cone {I}: infinite stratum")
            weights.append(sum(w))
        ranges = [range(int(floor(bound / w)) + 1) for w in weights]
        for ns in product(*ranges):
            if sum(n * w for n, w in zip(ns, weights)) > bound:
                continue
            d = tuple(sum(n * dual[i][a] for n, i in zip(ns, I)) for a in range(data.r))
            found[d] = by_key[tuple(frac(x) for x in d)]
    out = sorted(found.items(), key=lambda kv: (sum(dot(p, kv[0]) for p in frame.p), kv[0]))
    return out


# ---------------------------------------------------------------------------
# convenience bundle

class ToricOrbifold:
    """Validated data together with its Box, frame and cached sector rings."""

    def __init__(self, data, basis=None, splitting_cone=None):
        self.data = load(data)
        self.fan = validate(self.data)
        self.sectors = box(self.fan)
        self.frame = nef_frame(self.fan, basis, splitting_cone)
        self._cache = {}

    @property
    def name(self):
        return self.data.name

    @property
    def n(self):
        return self.data.n

    @property
    def r(self):
        return self.data.r

    def sector(self, k):
        return self.sectors[k]

    def sector_of(self, d):
        key = tuple(frac(x) for x in d)
        for s in self.sectors:
            if s.d == key:
                return s
        raise KeyError(f"{d} is not in K")

    def f(self, xi, v):
        return age_of_line_bundle(self.fan, xi, self.sectors[v] if isinstance(v, int) else v)

    def volume_check(self):
        """(sum_v dim H*(X_v), |N_tor| n! Vol(S_hat))."""
        pts = [self.fan.b_free(i) for i in range(self.data.m)]
        vol = lattice_volume(pts)
        return self.fan.order_tor * factorial(self.fan.n) * vol

    def cached(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]


def summary(X):
    fan = X.fan
    return {
        "name": X.name,
        "r": X.r,
        "m": X.data.m,
        "n": X.n,
        "m_prime": fan.m_prime,
        "genuine": list(fan.genuine),
        "extra": list(fan.extra),
        "anticones": sorted(sorted(I) for I in fan.anticones),
        "top_cones": [{"complement": list(I), "mult": fan.mult[I]} for I in fan.top],
        "N": {"free_rank": fan.n, "torsion": list(fan.torsion)},
        "b": [list(x) for x in fan.b],
        "box_size": len(X.sectors),
    }
