import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import COMPACT
from qcoh.charclasses import (
    KClass,
    VSpace,
    canonical_class,
    chi_rr,
    gamma_hat,
    kappa_checks,
    mukai_residual,
    parse_bundle,
    psi,
    reflection_residual,
    tch,
    todd,
    unimodularity,
    z_monodromy_residual,
)
from qcoh.errors import InputError
from qcoh.exact.numeric import context
from qcoh.toric import ToricOrbifold

ctx = context(256)
TOL = ctx.mpf(10) ** -60


def close(a, b, tol=TOL):
    return abs(a - b) < tol


def test_tch_and_todd_on_p1():
    P1 = ToricOrbifold("p1")
    c = tch(P1, KClass.line(P1, (1,)))
    assert close(c[0][0], 1) and close(c[0][1], 1)
    t = todd(P1)
    assert close(t[0][0], 1) and close(t[0][1], 1)


def test_gamma_hat_examples():
    g = gamma_hat(ToricOrbifold("p1"))
    assert close(g[0][1], -2 * ctx.euler)
    tw = gamma_hat(ToricOrbifold("p12"))[1]
    assert close(tw[0], ctx.sqrt(ctx.pi))


@pytest.mark.parametrize("name,xi,expected", [
    ("p1", (1,), 2),
    ("p1", (-2,), -1),
    ("p1", (0,), 1),
    ("p12", (1,), 1),
    ("p12", (2,), 2),
    ("p112", (2,), 4),
    ("p112", (0,), 1),
])
def test_chi_examples(name, xi, expected):
    X = ToricOrbifold(name)
    k, res = chi_rr(X, KClass.line(X, xi))
    assert k == expected and res < TOL


def test_psi_on_p1():
    P1 = ToricOrbifold("p1")
    v = psi(P1, KClass.structure_sheaf(P1))
    norm = 1 / ctx.sqrt(2 * ctx.pi)
    assert close(v[0][0], norm) and close(v[0][1], -2 * ctx.euler * norm)


def test_psi_of_point_on_p1():
    P1 = ToricOrbifold("p1")
    pt = KClass.structure_sheaf(P1) - KClass.line(P1, (-1,))
    v = psi(P1, pt)
    assert close(v[0][0], 0) and close(v[0][1], ctx.sqrt(2 * ctx.pi) * ctx.j)


def test_kappa_matrix_on_p1():
    W = VSpace(ToricOrbifold("p1"))
    K = W.matrix(W.kappa)
    expected = [[1, 0], [-4 * ctx.euler, -1]]
    assert all(close(K[i][j], expected[i][j]) for i in range(2) for j in range(2))


def test_pairing_is_not_symmetric():
    P1 = ToricOrbifold("p1")
    W = VSpace(P1)
    a, b = psi(P1, KClass.structure_sheaf(P1)), psi(P1, KClass.line(P1, (1,)))
    assert close(W.pairing(a, b), 0) and close(W.pairing(b, a), 2)


@pytest.mark.parametrize("name", COMPACT)
def test_reflection_and_z_monodromy(name):
    X = ToricOrbifold(name)
    assert reflection_residual(X) < TOL
    assert z_monodromy_residual(X) < TOL


@pytest.mark.parametrize("name", ["p1", "p12", "p112", "f2"])
def test_unimodular(name):
    rep = unimodularity(ToricOrbifold(name))
    assert rep["unimodular"] and rep["rank"] == rep["dim"]


@pytest.mark.parametrize("name", ["p1", "p12", "p112", "f2"])
def test_kappa_involution_and_leading_terms(name):
    rep = kappa_checks(ToricOrbifold(name))
    assert rep["square"] < TOL and rep["anticommute"] < TOL
    assert all(close(x, 1) for x in rep["leading"])


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(["p1", "p12", "p112"]), st.integers(-3, 3), st.integers(-3, 3))
def test_mukai_pairing_matches_chi(name, a, b):
    X = ToricOrbifold(name)
    _, _, res = mukai_residual(X, KClass.line(X, (a,)), KClass.line(X, (b,)))
    assert res < TOL


def test_k_class_algebra():
    P1 = ToricOrbifold("p1")
    V = parse_bundle(P1, "2*1;1*-1")
    assert V.rank() == 3
    assert V.dual() == parse_bundle(P1, "2*-1;1*1")
    assert canonical_class(P1) == KClass.line(P1, (-2,))
    assert (V - V).rank() == 0
    with pytest.raises(InputError):
        parse_bundle(P1, "2*x")
