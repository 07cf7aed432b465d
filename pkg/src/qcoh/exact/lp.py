"""Exact two-phase simplex over Fractions, and cone membership built on it."""

from fractions import Fraction

from ..errors import DimensionMismatch


def _pivot(T, basis, r, c):
    inv = 1 / T[r][c]
    T[r] = [x * inv for x in T[r]]
    for i, row in enumerate(T):
        if i != r and row[c]:
            f = row[c]
            T[i] = [x - f * y for x, y in zip(row, T[r])]
    basis[r] = c


def _run(T, basis, allowed):
    """Maximize with the objective row last (reduced costs). Bland's rule."""
    obj = T[-1]
    while True:
        obj = T[-1]
        enter = next((j for j in allowed if obj[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i in range(len(T) - 1):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        _pivot(T, basis, best[1], enter)


def linprog_max(c, A, b):
    """maximize c.x subject to A x = b, x >= 0, exactly.

    Returns (status, value, x) with status in {"optimal", "infeasible",
    "unbounded"}.
    """
    m = len(A)
    n = len(c)
    A = [[Fraction(x) for x in row] for row in A]
    b = [Fraction(x) for x in b]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-x for x in A[i]]
            b[i] = -b[i]
    # phase one: artificial columns n..n+m-1
    T = [A[i] + [Fraction(int(i == k)) for k in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    obj = [Fraction(0)] * n + [Fraction(1)] * m + [Fraction(0)]
    for row in T:
        obj = [o - x for o, x in zip(obj, row)]
    T.append(obj)
    _run(T, basis, range(n + m))
    if T[-1][-1] != 0:
        return "infeasible", None, None
    # drive artificials out of the basis
    for i in range(m):
        if basis[i] >= n:
            j = next((j for j in range(n) if T[i][j]), None)
            if j is not None:
                _pivot(T, basis, i, j)
    keep = [i for i in range(m) if basis[i] < n]
    T = [T[i][:n] + [T[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    obj = [-Fraction(x) for x in c] + [Fraction(0)]
    for row, bj in zip(T, basis):
        if obj[bj]:
            f = obj[bj]
            obj = [o - f * x for o, x in zip(obj, row)]
    T.append(obj)
    status = _run(T, basis, range(n))
    if status == "unbounded":
        return status, None, None
    x = [Fraction(0)] * n
    for row, bj in zip(T, basis):
        x[bj] = row[-1]
    return "optimal", T[-1][-1], x


def cone_member(x, gens, mode="closed"):
    """Is x in the positive (open) or non-negative (closed) span of gens?"""
    if mode not in ("open", "closed"):
        raise ValueError("mode must be 'open' or 'closed'")
    x = [Fraction(v) for v in x]
    dim = len(x)
    for g in gens:
        if len(g) != dim:
            raise DimensionMismatch(f"generator {g} does not live in Q^{dim}")
    if not gens:
        return all(v == 0 for v in x)
    k = len(gens)
    if mode == "closed":
        A = [[Fraction(g[r]) for g in gens] for r in range(dim)]
        status, _, _ = linprog_max([0] * k, A, x)
        return status != "infeasible"
    # variables: t, s_1..s_k, u ; coefficient c_i = t + s_i
    A = []
    for r in range(dim):
        A.append([sum(Fraction(g[r]) for g in gens)] + [Fraction(g[r]) for g in gens] + [0])
    A.append([1] + [0] * k + [1])
    status, value, _ = linprog_max([1] + [0] * (k + 1), A, x + [1])
    return status == "optimal" and value > 0
