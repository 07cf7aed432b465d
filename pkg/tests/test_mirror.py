from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import COMPACT
from qcoh.errors import AsymptoticsViolated, DimensionNotOne
from qcoh.exact.numeric import context
from qcoh.mirror import (
    bessel_oracle,
    galois_monodromy_check,
    h_consistency_residual,
    homogeneity_defects,
    i_function,
    mirror_map,
    oscillatory_check_1d,
    thimble_integral,
)
from qcoh.toric import ToricOrbifold

F = Fraction


def test_i_function_p1():
    series = i_function(ToricOrbifold("p1"), 2)
    assert series.term((0,)).coeffs == {0: [1, 0]}
    # 1/(omega + z)^2 = z^-2 - 2 omega z^-3
    assert series.term((1,)).coeffs == {-2: [1, 0], -3: [0, -2]}
    assert series.term((2,)).coeffs == {-4: [F(1, 4), 0], -5: [0, F(-3, 4)]}
    assert series.term((1,)).q_exponents == (1,)


def test_i_function_twisted_sector():
    series = i_function(ToricOrbifold("p12"), 1)
    t = series.term((F(1, 2),))
    assert t.sector == 1 and t.coeffs == {-2: [2]}
    assert series.term((1,)).coeffs == {-3: [F(1, 2), 0], -4: [0, -2]}


@pytest.mark.parametrize("name", COMPACT)
def test_homogeneity(name):
    X = ToricOrbifold(name)
    assert homogeneity_defects(X, i_function(X, 2)) == []


def test_mirror_map_examples():
    assert mirror_map(ToricOrbifold("p1"), 3).corrections == []
    # the twisted d = 1/2 term starts at z^-2, so no fractional correction
    assert mirror_map(ToricOrbifold("p12"), 3).corrections == []
    (d, qe, v, vec), = mirror_map(ToricOrbifold("p112x"), 2).corrections
    assert d == (F(-1, 2), F(1)) and qe == (F(1, 2), F(1)) and v == 1 and vec == [1]


def test_mirror_map_rejects_non_weak_fano():
    with pytest.raises(AsymptoticsViolated):
        mirror_map(ToricOrbifold("f3"), 3)


def test_galois_monodromy_examples():
    assert galois_monodromy_check(ToricOrbifold("p1"), (0,), 3) == (True, None)
    assert galois_monodromy_check(ToricOrbifold("p12"), (1,), 3) == (True, None)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(COMPACT), st.data())
def test_galois_monodromy_random(name, data):
    X = ToricOrbifold(name)
    xi = tuple(data.draw(st.lists(st.integers(-3, 3), min_size=X.r, max_size=X.r)))
    ok, _ = galois_monodromy_check(X, xi, 2)
    assert ok


@pytest.mark.parametrize("name", ["p1", "p12", "p112", "f2"])
def test_h_function_two_routes(name):
    X = ToricOrbifold(name)
    ctx = context(256)
    q = (F(1, 10),) * X.r
    assert h_consistency_residual(X, 2, q, F(-1)) < ctx.mpf(10) ** -60


def test_thimble_against_bessel():
    ctx = context(256)
    val, _ = thimble_integral(ToricOrbifold("p1"), (F(1, 100),), F(-1))
    assert abs(val - bessel_oracle(F(1, 100))) < ctx.mpf(10) ** -40


def test_oscillatory_twisted():
    rep = oscillatory_check_1d(ToricOrbifold("p12"), F(1, 100), -1)
    assert rep["residual"] < 1e-5
    assert rep["splitting_spread"] < 1e-40


def test_thimble_needs_dimension_one():
    with pytest.raises(DimensionNotOne):
        thimble_integral(ToricOrbifold("f2"), (F(1, 10), F(1, 10)), F(-1))
