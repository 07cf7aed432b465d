from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import COMPACT
from qcoh.cohomology import (
    OrbClass,
    integrate,
    lefschetz_sl2,
    pairing_gram,
    parse_class,
    poincare_pairing,
    sector_ring,
)
from qcoh.errors import DimensionMismatch, HardLefschetzFails
from qcoh.exact.lattice import det
from qcoh.toric import ToricOrbifold


def test_ring_examples():
    P1, P112 = ToricOrbifold("p1"), ToricOrbifold("p112")
    r = sector_ring(P1, 0)
    assert r.basis == ((0,), (1,))
    w = r.to_vector({(1,): 1})
    assert not any(r.mul(w, w))
    r = sector_ring(P112, 0)
    assert r.basis == ((0,), (1,), (2,))
    cube = r.to_vector({(3,): 1})
    assert not any(cube)
    assert sector_ring(P112, 1).basis == ((0,),)


@pytest.mark.parametrize("name", COMPACT)
def test_top_degree_is_one_dimensional(name):
    X = ToricOrbifold(name)
    for s in X.sectors:
        ring = sector_ring(X, s.index)
        assert ring.degrees.count(s.n_v) == 1 and max(ring.degrees) == s.n_v


def test_integration_examples():
    P1, P12, P112 = (ToricOrbifold(n) for n in ("p1", "p12", "p112"))
    assert integrate(P1, 0, {(1,): 1}) == 1
    assert integrate(P112, 0, {(2,): 1}) == Fraction(1, 2)
    assert integrate(P12, 1, {(0,): 1}) == Fraction(1, 2)
    with pytest.raises(DimensionMismatch):
        integrate(P12, 1, {(): 1})
    assert integrate(P12, 0, {(1,): 1}) == Fraction(1, 2)
    assert integrate(ToricOrbifold("f2"), 0, {(0, 2): 1}) == 2
    # lower degrees integrate to zero
    assert integrate(P112, 0, {(0,): 5, (1,): 1}) == 0


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["p1", "p112", "f2", "f3", "p112x"]), st.integers(0, 10**6), st.integers(0, 10**6))
def test_integration_is_direction_independent(name, s1, s2):
    X = ToricOrbifold(name)
    ring = sector_ring(X, 0)
    vec = [Fraction(k + 1) for k in range(ring.dim)]
    assert integrate(X, 0, vec, seed=s1) == integrate(X, 0, vec, seed=s2)


def test_pairing_examples():
    P1, P12, P112 = (ToricOrbifold(n) for n in ("p1", "p12", "p112"))
    one, w = OrbClass.unit(P1), OrbClass.from_poly(P1, 0, {(1,): 1})
    assert poincare_pairing(one, w) == 1 and poincare_pairing(one, one) == 0
    tw = OrbClass.unit(P12, 1)
    assert poincare_pairing(tw, tw.inv_star()) == Fraction(1, 2)
    p = OrbClass.from_poly(P112, 0, {(1,): 1})
    assert poincare_pairing(p, p) == Fraction(1, 2)


@pytest.mark.parametrize("name", COMPACT)
def test_pairing_nondegenerate(name):
    assert det(pairing_gram(ToricOrbifold(name))) != 0


@pytest.mark.parametrize("name", COMPACT)
def test_pairing_is_homogeneous(name):
    X = ToricOrbifold(name)
    basis = [OrbClass(X, {s.index: [Fraction(int(i == k)) for i in range(sector_ring(X, s.index).dim)]})
             for s in X.sectors for k in range(sector_ring(X, s.index).dim)]
    for a in basis:
        for b in basis:
            if poincare_pairing(a, b):
                (da,), (db,) = a.orbifold_degrees(), b.orbifold_degrees()
                assert da + db == 2 * X.n


def _random_vec(ring, data):
    return [Fraction(x) for x in data.draw(st.lists(st.integers(-3, 3), min_size=ring.dim, max_size=ring.dim))]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["p112", "f2", "f3", "p112x"]), st.data())
def test_cup_product_associative_commutative(name, data):
    ring = sector_ring(ToricOrbifold(name), 0)
    a, b, c = (_random_vec(ring, data) for _ in range(3))
    assert ring.mul(ring.mul(a, b), c) == ring.mul(a, ring.mul(b, c))
    assert ring.mul(a, b) == ring.mul(b, a)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["p112", "f2", "f3"]), st.data())
def test_normal_form_idempotent(name, data):
    ring = sector_ring(ToricOrbifold(name), 0)
    poly = data.draw(st.dictionaries(
        st.tuples(*[st.integers(0, 3)] * ring.nvars), st.integers(-3, 3).map(Fraction), max_size=5,
    ))
    nf = ring.normal_form(poly)
    assert ring.normal_form(nf) == nf


def test_sl2_on_p1():
    ring = sector_ring(ToricOrbifold("p1"), 0)
    t = lefschetz_sl2(ring, ring.linear([1]))
    assert t.a_dag == [[0, 1], [0, 0]]
    assert t.h == [[-1, 0], [0, 1]]
    assert t.lemma_checks == ((1, 0, Fraction(-1), True),)


def test_sl2_on_p112_and_f3():
    ring = sector_ring(ToricOrbifold("p112"), 0)
    checks = lefschetz_sl2(ring, ring.linear([1])).lemma_checks
    assert set(checks) == {(0, 1, Fraction(-1), True), (2, 0, Fraction(1, 2), True)}
    F3 = ToricOrbifold("f3")
    ring = sector_ring(F3, 0)
    assert all(ok for *_, ok in lefschetz_sl2(ring, ring.linear(F3.frame.rho)).lemma_checks)


def test_sl2_rejects_non_ample():
    F2 = ToricOrbifold("f2")
    ring = sector_ring(F2, 0)
    with pytest.raises(HardLefschetzFails):
        lefschetz_sl2(ring, ring.divisor(0))


def test_top_degree_killed_by_cup():
    ring = sector_ring(ToricOrbifold("f2"), 0)
    top = [Fraction(int(i == ring.top_index)) for i in range(ring.dim)]
    for a in range(2):
        assert not any(ring.mul(ring.linear([int(a == b) for b in range(2)]), top))


def test_parse_class_and_json_round_trip():
    X = ToricOrbifold("f2")
    ring = sector_ring(X, 0)
    vec = parse_class(ring, "1/2*p1 - p2^2 + 3")
    assert vec == ring.to_vector({(1, 0): Fraction(1, 2), (0, 2): -1, (0, 0): 3})
    cls = OrbClass(X, {0: vec})
    assert OrbClass.from_json(X, cls.to_json()) == cls
    with pytest.raises(DimensionMismatch):
        parse_class(ring, "p3")
