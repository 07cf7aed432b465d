from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcoh.exact.series import Mat
from qcoh.ttstar import (
    IDENT,
    ZERO,
    apoly,
    birkhoff_recursion,
    cv_data,
    elem,
    j_series,
    latex_table,
    metric,
    painleve_residual,
    parse_poly,
    poly_to_str,
    positivity_check,
    s_matrix,
    s_matrix_assembled,
    s_matrix_closed_form,
)


@pytest.fixture(scope="module")
def met():
    return metric(4)


def test_j_series_examples():
    J0, J1 = j_series(3)
    assert J0[(0, 0)] == elem({(0, 0): 1})
    assert J0[(2, 0)] == elem({(-4, 0): Fraction(1, 4)})
    assert J1[(1, 0)] == elem({(-2, 0): -2})
    # -2 H_3 / (3!)^2 = -11/108
    assert J1[(3, 0)] == elem({(-6, 0): Fraction(-11, 108)})
    assert J1[(0, 0)] == 0


def test_s_matrix_constant_term_is_identity():
    S = s_matrix((2, 2))
    assert S[(0, 0)] == IDENT


def test_s_matrix_routes_agree_off_diagonal_box():
    box = (3, 1)
    a, b = s_matrix_closed_form(box), s_matrix_assembled(box)
    for n in range(4):
        for m in range(2):
            assert a[(n, m)] == b[(n, m)]


def _mat(x):
    # missing bidegrees come back as a bare 0
    return x if isinstance(x, Mat) else Mat([[ZERO, ZERO], [ZERO, ZERO]])


def test_birkhoff_factorization():
    box = (3, 3)
    S = s_matrix(box)
    Bt, Ct = birkhoff_recursion(S, box)
    for (n, m), M in Bt.items():
        if (n, m) == (0, 0):
            continue
        # Btilde - 1 vanishes at z = 0 and Ctilde has no positive z powers
        for r in range(2):
            for s in range(2):
                assert all(k >= 1 for k in _mat(M)[r, s].exponents())
                assert all(k <= 0 for k in _mat(Ct[(n, m)])[r, s].exponents())
    prod = Bt * Ct
    for n in range(4):
        for m in range(4):
            assert _mat(prod[(n, m)]) == _mat(S[(n, m)])


def test_metric_leading_terms(met):
    assert met.to_strings()[:2] == ["a", "a^3+4a^2+8a+8"]
    assert all(max(f.c) == 2 * n + 1 and f.c[2 * n + 1] == 1 for n, f in enumerate(met.F))
    assert all(c > 0 for f in met.F for c in f.c.values())


def test_positivity_and_painleve(met):
    assert all(positivity_check(met).values())
    assert abs(painleve_residual(met, "0.05")) < 1e-12


def test_cv_data(met):
    d = cv_data(met)
    assert d["g"] == [[0, 1], [1, 0]]
    assert d["dlog_h"][0] == apoly({-1: -1})
    q11, q22 = d["Q"][0][0], d["Q"][1][1]
    assert q11[0] == apoly({-1: 2, 0: Fraction(-1, 2)})
    assert all(x == -y for x, y in zip(q11, q22))


def test_latex_table(met):
    tex = latex_table(met)
    assert tex.startswith("\\begin{tabular}") and "a_\\tau^{3} + 4a_\\tau^{2}" in tex


polys = st.dictionaries(st.integers(0, 7), st.fractions(max_denominator=50).filter(bool), max_size=5).map(apoly)


@given(polys)
def test_poly_string_round_trip(p):
    assert parse_poly(poly_to_str(p)) == p


def test_poly_to_str_examples(met):
    assert poly_to_str(met.F[2]) == "a^5+8a^4+121/4a^3+129/2a^2+145/2a+145/4"
    assert poly_to_str(apoly({})) == "0"
    assert poly_to_str(apoly({1: -1, 0: Fraction(1, 3)})) == "-a+1/3"
