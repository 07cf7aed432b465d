import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import COMPACT, WEAK_FANO
from qcoh.errors import EmptyStack, EtaNotGeneric, InputError, NotCompact
from qcoh.toric import StackyData, ToricOrbifold, keff_enumerate, load, summary, weak_fano_check


def make(rank, divisors, eta):
    return ToricOrbifold(StackyData.from_json({"rank": rank, "divisors": divisors, "eta": eta}))


def test_p1_fan():
    X = ToricOrbifold("p1")
    fan = X.fan
    assert fan.anticones == {frozenset({0}), frozenset({1}), frozenset({0, 1})}
    assert fan.n == 1 and fan.torsion == () and fan.m_prime == 2
    assert sorted(fan.b) == [(-1,), (1,)]
    assert fan.top == ((0,), (1,)) and set(fan.mult.values()) == {1}


def test_p112_fan():
    fan = ToricOrbifold("p112").fan
    assert fan.n == 2 and fan.order_tor == 1
    assert len(fan.top) == 3
    assert sorted(fan.mult.values()) == [1, 1, 2]


def test_validation_errors():
    with pytest.raises(NotCompact):
        make(1, [[1], [-1]], ["1"])
    with pytest.raises(EmptyStack):
        make(1, [[1], [1]], ["-1"])
    with pytest.raises(EtaNotGeneric):
        make(2, [[1, 0], [-2, 1], [1, 0], [0, 1]], ["0", "1"])
    with pytest.raises(InputError):
        make(1, [[1], [1]], [0.5])
    with pytest.raises(InputError):
        make(2, [[1], [1]], ["1"])


def test_load_by_name_and_path(tmp_path):
    path = tmp_path / "x.toric.json"
    path.write_text(json.dumps({"rank": 1, "divisors": [[1], [1]], "eta": ["1"], "name": "line"}))
    assert load(str(path)).name == "line"
    assert load("p1").m == 2
    with pytest.raises(InputError):
        load("no-such-fixture")


def test_box_examples():
    assert [(s.age, s.n_v) for s in ToricOrbifold("p1").sectors] == [(0, 1)]
    p12 = ToricOrbifold("p12").sectors
    assert [(s.d, s.age, s.n_v) for s in p12] == [((0,), 0, 1), ((Fraction(1, 2),), Fraction(1, 2), 0)]
    p112 = ToricOrbifold("p112").sectors
    assert [(s.d, s.age, s.n_v) for s in p112] == [((0,), 0, 2), ((Fraction(1, 2),), 1, 0)]


def test_box_of_extended_data():
    X = ToricOrbifold("p112x")
    assert X.fan.genuine == (0, 1, 2) and X.fan.extra == (3,)
    assert [(s.d, s.age) for s in X.sectors] == [((0, 0), 0), ((Fraction(1, 2), 0), 1)]


@pytest.mark.parametrize("name", COMPACT)
def test_age_duality(name):
    X = ToricOrbifold(name)
    for s in X.sectors:
        assert s.age + X.sectors[s.inv].age == X.n - s.n_v
    assert X.sectors[0].age == 0 and X.sectors[0].n_v == X.n


@pytest.mark.parametrize("name", WEAK_FANO)
def test_volume_identity(orbifold, name):
    from qcoh.cohomology import sector_ring

    X = orbifold(name)
    assert sum(sector_ring(X, s.index).dim for s in X.sectors) == X.volume_check()


def test_weak_fano():
    for name in ["p1", "p112"]:
        X = ToricOrbifold(name)
        assert weak_fano_check(X.fan, X.frame)["hrho_in_cl_Ctilde"]
    F3 = ToricOrbifold("f3")
    rep = weak_fano_check(F3.fan, F3.frame)
    assert not rep["hrho_in_cl_Ctilde"] and not rep["rho_nef"]
    X = ToricOrbifold("p112x")
    assert weak_fano_check(X.fan, X.frame)["ages_of_bj"] == [1]


def test_keff_examples():
    def ds(name, bound):
        X = ToricOrbifold(name)
        return [(d, s.index) for d, s in keff_enumerate(X.fan, X.frame, bound, X.sectors)]

    assert ds("p1", 2) == [((0,), 0), ((1,), 0), ((2,), 0)]
    assert ds("p12", 1) == [((0,), 0), ((Fraction(1, 2),), 1), ((1,), 0)]
    assert [d for d, _ in ds("p112", 1)] == [(0,), (Fraction(1, 2),), (1,)]


def test_age_of_line_bundle_examples():
    X = ToricOrbifold("p12")
    assert X.f((5,), 0) == 0
    assert X.f((1,), 1) == Fraction(1, 2)
    assert ToricOrbifold("p112").f((2,), 1) == 0


@pytest.mark.parametrize("name", COMPACT)
def test_nef_frame_invariants(name):
    X = ToricOrbifold(name)
    f, D, r = X.frame, X.data.D, X.r
    for a in range(r):
        # p_a = sum_i D_i ell_ia
        assert tuple(sum(Fraction(D[i][b]) * f.ell[i][a] for i in range(X.data.m)) for b in range(r)) == tuple(f.p[a])
    for i in range(X.data.m):
        assert tuple(sum(f.m_mat[i][a] * Fraction(f.p[a][b]) for a in range(r)) for b in range(r)) == tuple(D[i])
    for j, dv in f.Dvee.items():
        assert sum(Fraction(x) * y for x, y in zip(D[j], dv)) == 1


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(COMPACT), st.data())
def test_box_well_defined_mod_lattice(name, data):
    X = ToricOrbifold(name)
    s = data.draw(st.sampled_from(X.sectors))
    shift = data.draw(st.lists(st.integers(-3, 3), min_size=X.r, max_size=X.r))
    assert X.sector_of([x + k for x, k in zip(s.d, shift)]).index == s.index


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(COMPACT), st.data())
def test_line_bundle_ages_pair_up(name, data):
    X = ToricOrbifold(name)
    xi = tuple(data.draw(st.lists(st.integers(-4, 4), min_size=X.r, max_size=X.r)))
    for s in X.sectors:
        a, b = X.f(xi, s.index), X.f(xi, s.inv)
        assert a + b in (0, 1) and (a + b == 0) == (a == 0)


def test_summary_fields():
    out = summary(ToricOrbifold("p1"))
    assert out["m_prime"] == 2 and out["box_size"] == 1 and out["n"] == 1
