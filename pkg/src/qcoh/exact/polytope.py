"""Exact volume of a full-dimensional lattice polytope (pulling triangulation)."""

from fractions import Fraction
from itertools import combinations
from math import factorial

from .lattice import det, nullspace, rank


def _affine_rank(points, idx):
    idx = list(idx)
    if not idx:
        return -1
    if len(idx) == 1:
        return 0
    base = points[idx[0]]
    return rank([[a - b for a, b in zip(points[i], base)] for i in idx[1:]])


def facets(points):
    """Vertex-index sets of the facets of conv(points) (full-dimensional)."""
    n = len(points[0])
    pts = [tuple(Fraction(x) for x in p) for p in points]
    found = set()
    for sub in combinations(range(len(pts)), n):
        base = pts[sub[0]]
        rows = [[a - b for a, b in zip(pts[i], base)] for i in sub[1:]]
        if n == 1:
            normal = [Fraction(1)]
        else:
            ker = nullspace(rows)
            if len(ker) != 1:
                continue
            normal = ker[0]
        h = sum(a * b for a, b in zip(normal, base))
        vals = [sum(a * b for a, b in zip(normal, p)) - h for p in pts]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            on = frozenset(i for i, v in enumerate(vals) if v == 0)
            if _affine_rank(pts, on) == n - 1:
                found.add(on)
    return sorted(found, key=sorted)


def _triangulate(pts, face, dim, all_facets):
    if dim == 0:
        return [(min(face),)]
    apex = min(face)
    subfaces = set()
    for F in all_facets:
        g = face & F
        if apex not in g and _affine_rank(pts, g) == dim - 1:
            subfaces.add(frozenset(g))
    # keep only maximal ones (faces of codimension one in `face`)
    simplices = []
    for g in subfaces:
        for s in _triangulate(pts, g, dim - 1, all_facets):
            simplices.append((apex,) + s)
    return simplices


def lattice_volume(points):
    """Euclidean volume of conv(points) in Q^n, exact."""
    pts = [tuple(Fraction(x) for x in p) for p in points]
    n = len(pts[0])
    if _affine_rank(pts, range(len(pts))) < n:
        return Fraction(0)
    F = facets(pts)
    simplices = _triangulate(pts, frozenset(range(len(pts))), n, F)
    total = Fraction(0)
    for s in simplices:
        v0 = pts[s[0]]
        total += abs(det([[a - b for a, b in zip(pts[i], v0)] for i in s[1:]]))
    return total / factorial(n)
