"""Integer and rational linear algebra: Smith/Hermite forms, solves, kernels."""

from dataclasses import dataclass
from fractions import Fraction


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def transpose(A):
    return [list(c) for c in zip(*A)]


@dataclass(frozen=True)
class SnfDecomposition:
    A: tuple
    U: tuple
    D: tuple
    V: tuple

    @property
    def diagonal(self):
        k = min(len(self.D), len(self.D[0]) if self.D else 0)
        return [self.D[i][i] for i in range(k)]

    def invariant_factors(self):
        """Cokernel Z^rows / A Z^cols: nonzero diagonal entries plus free rank."""
        diag = self.diagonal
        torsion = [d for d in diag if d > 1]
        free = len(self.D) - sum(1 for d in diag if d != 0)
        return torsion, free


def snf(A):
    """Smith normal form with U*A*V = D, U and V unimodular."""
    if not A or not A[0]:
        raise ValueError("snf needs a nonempty matrix")
    m, n = len(A), len(A[0])
    D = [[int(x) for x in row] for row in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k*row_src
        for M in (D, U):
            M[dst] = [x + k * y for x, y in zip(M[dst], M[src])]

    def add_col(dst, src, k):
        for M in (D, V):
            for row in M:
                row[dst] += k * row[src]

    for t in range(min(m, n)):
        cand = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not cand:
            break
        _, i0, j0 = min(cand)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    tup = lambda M: tuple(tuple(r) for r in M)
    return SnfDecomposition(tup(A), tup(U), tup(D), tup(V))


def hnf_rows(vectors):
    """Row-style Hermite basis of the lattice spanned by integer vectors.

    Returns a list of rows in echelon form with positive pivots, entries
    above each pivot reduced into [0, pivot).
    """
    rows = [list(map(int, v)) for v in vectors if any(v)]
    if not rows:
        return []
    ncols = len(rows[0])
    basis = []
    col = 0
    while rows and col < ncols:
        nz = [r for r in rows if r[col]]
        if not nz:
            col += 1
            continue
        while len([r for r in rows if r[col]]) > 1:
            nz = sorted((r for r in rows if r[col]), key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                k = r[col] // piv[col]
                for c in range(ncols):
                    r[c] -= k * piv[c]
            rows = [r for r in rows if any(r)]
        piv = next(r for r in rows if r[col])
        rows = [r for r in rows if r is not piv]
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        col += 1
    # reduce above pivots
    for i, row in enumerate(basis):
        pc = next(c for c, x in enumerate(row) if x)
        for upper in basis[:i]:
            k = upper[pc] // row[pc]
            for c in range(ncols):
                upper[c] -= k * row[c]
    return basis


def reduce_mod_lattice(x, hnf_basis):
    """Canonical representative of x modulo the lattice with given HNF basis."""
    x = [int(v) for v in x]
    for row in hnf_basis:
        pc = next(c for c, v in enumerate(row) if v)
        k = x[pc] // row[pc]
        x = [a - k * b for a, b in zip(x, row)]
    return tuple(x)


def rref(M):
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    A = [[Fraction(x) for x in row] for row in M]
    rows, cols = len(A), len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def rank(M):
    if not M:
        return 0
    return len(rref(M)[1])


def det(M):
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            d = -d
        d *= A[c][c]
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] / A[c][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return d


def inverse(M):
    n = len(M)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(M)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def solve(M, b):
    """Solve M x = b over Q for square invertible M."""
    inv = inverse(M)
    return [sum(a * Fraction(y) for a, y in zip(row, b)) for row in inv]


def nullspace(M):
    """Basis of {x : M x = 0} over Q."""
    ncols = len(M[0])
    R, piv = rref(M)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, p in enumerate(piv):
            x[p] = -R[i][f]
        basis.append(x)
    return basis
