import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from torfac import cobordism as cb
from torfac import fan as fn
from torfac import generators as gen
from torfac import lattice as lat
from torfac.errors import NotACircuit, NotAFace, PiIndependent

R1, R2, R3 = (1, 0, 0), (0, 1, 0), (1, 1, 1)
E1C = frozenset({R1, R2, R3})
E1 = fn.fan_from_cones(3, [E1C], True)


def test_ray_pi_data():
    assert cb.ray_pi_data((1, 1, 1)) == ((1, 1), 1, 1)
    assert cb.ray_pi_data((2, 2, 1)) == ((1, 1), Fraction(1, 2), 2)
    assert cb.ray_pi_data((1, 2, 1)) == ((1, 2), 1, 1)


def test_pi_independence():
    assert cb.is_pi_independent(frozenset({(1, 0, 0), (1, 2, 1)}))
    assert not cb.is_pi_independent(E1C)
    assert cb.is_pi_independent(frozenset({R3}))


def test_dependence_relation_examples():
    dep = cb.dependence_relation(E1C)
    assert {r: dep.coefficient(r) for r in E1C} == {R1: -1, R2: -1, R3: 1}
    assert dep.Iplus == {R3} and dep.Iminus == {R1, R2}
    assert (len(dep.I1), len(dep.Im1)) == (1, 2)
    cone = frozenset({(2, 2, 1), R1, R2})
    dep = cb.dependence_relation(cone)
    assert {r: dep.coefficient(r) for r in cone} == {(2, 2, 1): 1, R1: -1, R2: -1}
    assert sum(x * d.w for x, d in zip(dep.r, dep.ray_pi)) == Fraction(1, 2)
    two = frozenset({(1, 0, 1), (1, 0, -1)})
    dep = cb.dependence_relation(two)
    assert sorted(dep.r) == [-1, 1]
    assert sum(x * d.w for x, d in zip(dep.r, dep.ray_pi)) == 2
    with pytest.raises(PiIndependent):
        cb.dependence_relation(frozenset({R1, R2}))


def test_circuits():
    assert cb.circuit_of(E1C) == E1C
    assert cb.is_circuit(E1C)
    four = frozenset({(1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 1), (0, 0, 1, 0)})
    assert cb.circuit_of(four) == four - {(0, 0, 1, 0)}
    assert not cb.is_circuit(four)
    assert not cb.is_circuit(frozenset({R1, R2}))


def test_profiles():
    c = frozenset({(1, 0, 0), (1, 2, 1)})
    assert cb.pi_multiplicity(c) == 2
    assert cb.pi_profile(c) == (2, 0, 0, 0)
    assert cb.pi_multiplicity(E1C) == 1
    assert cb.pi_profile(E1C) == (1, 1, 3, 3)
    two = frozenset({(1, 0, 1), (1, 0, -1)})
    assert cb.pi_profile(two)[1:] == (1, 2, 2)
    assert cb.fan_profile(E1) == ((1, 1, 3, 3), 1)
    smooth = fn.fan_from_cones(3, [[(1, 0, 0), (0, 1, 0)], [(0, 1, 0), (-1, 0, 0)]], True)
    assert cb.fan_profile(smooth) == ((1, 0, 0, 0), 2)
    mixed = fn.fan_from_cones(3, [c, [(-1, 0, 5), (0, -1, 5), (-1, -1, 7)]], True)
    assert cb.fan_profile(mixed) == ((2, 0, 0, 0), 1)


def test_codefinite():
    assert cb.is_codefinite({R1, R2}, E1C)
    assert not cb.is_codefinite({R1, R3}, E1C)
    two = frozenset({(1, 0, 1), (1, 0, -1), (0, 1, 0)})
    for tau in fn.faces(two):
        if cb.is_pi_independent(tau):
            assert cb.is_codefinite(tau, two)
    with pytest.raises(NotAFace):
        cb.is_codefinite({(5, 5, 1)}, E1C)


def test_boundaries_of_e1():
    lower, upper = cb.boundaries(E1)
    assert upper == {frozenset({R1, R2})}
    assert lower == {frozenset({R1, R3}), frozenset({R2, R3})}
    assert cb.dual_basis_boundaries(E1C) == (lower, upper)


def test_boundaries_of_independent_cone():
    c = frozenset({(1, 0, 0), (1, 2, 1)})
    lower, upper = cb.boundaries(fn.fan_from_cones(3, [c], True))
    assert lower == upper == {c}


def test_signed_vectors_and_lifts():
    assert cb.signed_vector(E1C, 1) == (1, 1)
    assert cb.signed_vector(E1C, -1) == (1, 1)
    rho, e = cb.lift_signed_vector(E1C, 1)
    assert (rho, e) == ((2, 2, 1), 1)
    out, rho, e = cb.pos_neg_star_subdivide(E1, E1C, 1)
    assert len(out) == 3 and fn.refines(out, E1)
    two = frozenset({(1, 2, 1), (1, 2, -1)})
    assert cb.signed_vector(two, 1) == cb.signed_vector(two, -1) == (1, 2)
    with pytest.raises(NotACircuit):
        cb.lift_signed_vector(frozenset({R1, R2}), 1)


@given(st.integers(0, 10**6))
def test_relation_normalization_and_permutation(seed):
    rng = random.Random(seed)
    cone = gen.random_pi_dependent_cone(rng, rng.randint(2, 4))
    dep = cb.dependence_relation(cone)
    assert max(abs(x) for x in dep.r) == 1
    assert sum(x * d.w for x, d in zip(dep.r, dep.ray_pi)) > 0
    assert len(dep.I1) + len(dep.Im1) >= 1
    dim = len(dep.ray_pi[0].v)
    assert all(sum(x * d.v[j] for x, d in zip(dep.r, dep.ray_pi)) == 0 for j in range(dim))
    # the relation only depends on the ray set
    rays = list(cone)
    rng.shuffle(rays)
    cb.dependence_relation.cache_clear()
    again = cb.dependence_relation(frozenset(rays))
    assert {r: again.coefficient(r) for r in cone} == {r: dep.coefficient(r) for r in cone}


@given(st.integers(0, 10**6))
def test_lifted_ray_is_interior(seed):
    rng = random.Random(seed)
    cone = gen.random_pi_dependent_cone(rng, rng.randint(2, 3))
    circuit = cb.circuit_of(cone)
    for sign in (1, -1):
        rho, e = cb.lift_signed_vector(circuit, sign)
        a = fn.coefficients(circuit, rho)
        assert a is not None and all(x > 0 for x in a)
        v = cb.signed_vector(circuit, sign)
        p = fn.project(rho)
        assert lat.primitive(p)[0] == lat.primitive(v)[0]
        assert lat.primitive(v)[1] == e
