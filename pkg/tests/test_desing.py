import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from torfac import cobordism as cb
from torfac import desing as ds
from torfac import fan as fn
from torfac import generators as gen
from torfac.errors import AlreadyNonsingular, DimensionTooSmall, InvalidInput, NotACircuit

from oracles import parent_map, sample_points, uncovered_points

E1C = frozenset({(1, 0, 0), (0, 1, 0), (1, 1, 1)})
E1 = fn.fan_from_cones(3, [E1C], True)
E2 = fn.fan_from_cones(3, [[(1, 0, 0), (1, 2, 1)]], True)


def test_config_validation():
    with pytest.raises(InvalidInput):
        ds.DesingConfig(par_choice="random")


def test_nonsingular_input_is_untouched():
    out, trace = ds.pi_desingularize(E1)
    assert out == E1 and len(trace) == 0


def test_single_par_subdivision():
    out, trace = ds.pi_desingularize(E2)
    assert [e.step_kind for e in trace.entries] == [ds.PAR]
    assert trace.entries[0].center_ray == (2, 2, 1)
    assert len(out) == 2 and len(out.rays) == 3
    assert all(cb.pi_multiplicity(c) == 1 for c in out.cones)
    assert trace.entries[0].to_json()["fan_profile_after"] == {"g": [1, 0, 0, 0], "s": 2}


def test_step1_select_example():
    sel = ds.step1_select(E2)
    cone = E2.cones[0]
    assert (sel.eta, sel.gamma, sel.tau) == (cone, cone, cone)
    assert sel.v == (1, 1) and sel.rho == (2, 2, 1)
    with pytest.raises(AlreadyNonsingular):
        ds.step1_select(E1)


def test_step1_prefers_higher_multiplicity():
    far = [(-1, 0, 5), (0, -1, 5), (-1, -1, 7)]
    fan = fn.fan_from_cones(3, [E1C, [(1, 0, -3), (1, 2, -2)]], True)
    sel = ds.step1_select(fan)
    assert sel.eta == frozenset({(1, 0, -3), (1, 2, -2)})
    assert len(far) == 3


def test_choose_par_point_modes():
    tau = frozenset({(1, 0, 0), (1, 3, 0)})
    assert ds.choose_par_point(tau, "lexmin") == (1, 1)
    assert ds.choose_par_point(tau, "balanced") in {(1, 1), (1, 2)}


def test_make_codefinite_mult_one_circuit():
    eta = frozenset({(1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 1), (0, 0, 1, 0)})
    fan = fn.fan_from_cones(4, [eta], True)
    tau = frozenset({(1, 0, 0, 0), (1, 1, 0, 1)})
    assert not cb.is_codefinite(tau, eta)
    out = ds.make_codefinite(fan, tau)
    assert len(out.rays) == len(fan.rays) + 1
    holders = [c for c in out.cones if tau <= c]
    assert holders and all(cb.is_codefinite(tau, c) for c in holders)
    assert fn.refines(out, fan)


def test_prop_fondamentale_errors():
    with pytest.raises(NotACircuit):
        ds.prop_fondamentale_step(E2, E2.cones[0])
    two = frozenset({(1, 2, 1), (1, 2, -1)})
    with pytest.raises(DimensionTooSmall):
        ds.prop_fondamentale_step(fn.fan_from_cones(3, [two], True), two)


def test_prop_fondamentale_on_singular_circuit():
    circuit = frozenset({(1, 0, 0), (1, 2, 0), (1, 1, 1)})
    fan = fn.fan_from_cones(3, [circuit], True)
    assert cb.is_circuit(circuit)
    out, case, kappa, gamma, rho = ds.prop_fondamentale_step(fan, circuit)
    assert case in ("A", "B")
    if case == "B":
        assert kappa in out.cone_set
        assert cb.pi_multiplicity(gamma) == cb.pi_multiplicity(circuit)
        assert cb.is_codefinite(gamma, kappa)
    assert fn.refines(out, fan)


def _check_desing(fan, rng, points=60):
    out, trace = ds.pi_desingularize(fan)
    assert cb.is_pi_nonsingular(out)
    assert all(
        cb.pi_multiplicity(f) == 1
        for c in out.cones
        for f in fn.faces(c)
        if cb.is_pi_independent(f)
    )
    assert ds.check_trace(trace)
    assert all(parent_map(out, fan).values())
    assert not uncovered_points(out, fan, sample_points(rng, fan.cones, points))
    return out, trace


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_desing_random_plane_cobordisms(seed):
    rng = random.Random(seed)
    _check_desing(gen.random_cobordism_fan(rng, n_rank=2), rng)


@settings(max_examples=20)
@given(st.integers(0, 10**6))
def test_desing_random_small_space_cobordisms(seed):
    rng = random.Random(seed)
    fan = gen.random_cobordism_fan(rng, n_rank=3, bound=2, max_cones=3)
    assume(cb.fan_profile(fan).g.mult <= 6)
    _check_desing(fan, rng, 30)


@given(st.integers(0, 10**6))
def test_codefinite_subdivision_never_raises_profile(seed):
    rng = random.Random(seed)
    eta = gen.random_pi_dependent_cone(rng, rng.randint(2, 3), bound=3)
    dep = cb.dependence_relation(eta)
    faces = [
        f for f in fn.faces(eta)
        if cb.is_pi_independent(f) and cb.pi_multiplicity(f) > 1 and cb.is_codefinite(f, eta)
    ]
    top = max(cb.pi_multiplicity(eta - {r}) for r in dep.support)
    for tau in faces:
        for v in ds.lat.enumerate_parallelepiped(cb.projections(tau))[:4]:
            rho = ds.lift_to_span(tau, v)
            sub = fn.fan_from_cones(len(v) + 1, fn.subdivide_cone(eta, rho), True)
            before = cb.FanProfile(cb.pi_profile(eta), 1)
            after = cb.fan_profile(sub)
            assert after <= before
            if any(tau <= eta - {r} and cb.pi_multiplicity(eta - {r}) == top for r in dep.support):
                assert after < before


def test_lemma_identities(rng):
    for _ in range(100):
        eta = gen.random_pi_dependent_cone(rng, rng.randint(2, 4), bound=4)
        dep = cb.dependence_relation(eta)
        for ray, r in zip(dep.rays, dep.r):
            assert cb.is_pi_independent(eta - {ray}) == (r != 0)
        nz = [(ray, r) for ray, r in zip(dep.rays, dep.r) if r]
        for ri, xi in nz:
            for rj, xj in nz:
                assert abs(xj) * cb.pi_multiplicity(eta - {ri}) == abs(xi) * cb.pi_multiplicity(eta - {rj})
