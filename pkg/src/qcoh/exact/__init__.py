"""Scalar backends and exact polynomial, series and lattice arithmetic."""

from .groebner import groebner, reduce, standard_monomials
from .lattice import SnfDecomposition, det, hnf_rows, inverse, nullspace, rank, snf, solve
from .laurent import LaurentPoly, laurent_split
from .lp import cone_member, linprog_max
from .numeric import context, tolerance
from .polytope import lattice_volume
from .ratfun import RatFun, ratfun_constant_value
from .rational import Fraction, Q, frac, to_str
from .series import BiSeries, Mat

__all__ = [
    "BiSeries", "Fraction", "LaurentPoly", "Mat", "Q", "RatFun", "SnfDecomposition",
    "cone_member", "context", "det", "frac", "groebner", "hnf_rows", "inverse",
    "lattice_volume", "laurent_split", "linprog_max", "nullspace", "rank",
    "ratfun_constant_value", "reduce", "snf", "solve", "standard_monomials",
    "to_str", "tolerance",
]
