import random

import pytest
from hypothesis import given, settings, strategies as st

from torfac import cobordism as cb
from torfac import factorization as fz
from torfac import fan as fn
from torfac import generators as gen
from torfac import lattice as lat
from torfac.errors import (
    BadCertificate,
    BadWeights,
    NotACircuit,
    NotAFace,
    NotFiltrable,
    NotMinimal,
    NotPiNonsingular,
    NotSmoothCenter,
    ProjectionNotAFan,
)

R1, R2, R3 = (1, 0, 0), (0, 1, 0), (1, 1, 1)
E1C = frozenset({R1, R2, R3})
E1 = fn.fan_from_cones(3, [E1C], True)
A2 = fn.fan_from_cones(2, [[(1, 0), (0, 1)]])
BL = fn.star_subdivide(A2, (1, 1))
A3 = fn.fan_from_cones(3, [[(1, 0, 0), (0, 1, 0), (0, 0, 1)]])
UNDER = frozenset({R1, R2, (1, 1, -1)})
STACK = fn.fan_from_cones(3, [E1C, UNDER], True)


def test_boundary_fans_of_e1():
    lower, upper = fz.boundary_fans(E1)
    assert lower == BL and upper == A2


def test_boundary_fans_of_independent_cobordism():
    fan = fn.fan_from_cones(3, [[(1, 0, 0), (0, 1, 2)]], True)
    lower, upper = fz.boundary_fans(fan)
    assert lower == upper
    steps, report = fz.factorize(fan)
    assert steps == [] and report.initial_lower == report.final_upper


def test_single_step_of_e1():
    (step,), report = fz.factorize(E1)
    assert step.v == (1, 1)
    assert step.lower_center == {(1, 1)} and step.lower_degenerate
    assert step.upper_center == {(1, 0), (0, 1)} and not step.upper_degenerate
    assert step.lower_fan == BL and step.upper_fan == A2 and step.middle_fan == BL
    assert fz.verify_step(step) == []
    assert report.chain_consistent and report.centers_smooth == [True]
    assert "origin" in fz.summary_lines([step])[0]


def test_cobordism_of_blowup_round_trips():
    assert fz.cobordism_of_blowup(A2, [(1, 0), (0, 1)]) == E1
    cob = fz.cobordism_of_blowup(A3, [(1, 0, 0), (0, 1, 0)])
    (step,), report = fz.factorize(cob)
    assert step.upper_center == {(1, 0, 0), (0, 1, 0)}
    assert step.lower_fan == fn.star_subdivide(A3, (1, 1, 0))
    assert step.upper_fan == A3
    dep = cb.dependence_relation(step.circuit)
    assert (len(dep.Iplus), len(dep.Iminus)) == (1, 2)
    assert report.centers_smooth == [True]


def test_cobordism_of_blowup_errors():
    with pytest.raises(NotAFace):
        fz.cobordism_of_blowup(A2, [(1, 1)])
    sing = fn.fan_from_cones(2, [[(1, 0), (1, 2)]])
    with pytest.raises(NotSmoothCenter):
        fz.cobordism_of_blowup(sing, [(1, 0), (1, 2)])
    with pytest.raises(NotSmoothCenter):
        fz.cobordism_of_blowup(E1, [R1])


def test_stacked_circuits_are_ordered_by_the_flow():
    assert fz.circuit_order(STACK) == [E1C, UNDER]
    assert fz.precedence_edges(STACK) == {(E1C, UNDER)}
    steps, report = fz.factorize(STACK)
    assert len(steps) == 2 and report.chain_consistent
    assert steps[0].upper_fan == steps[1].lower_fan == A2
    assert report.initial_lower == BL and report.final_upper == BL
    assert all(fz.verify_step(s) == [] for s in steps)


def test_order_certificate():
    ok = {E1C: 0, UNDER: 1}
    assert fz.circuit_order(STACK, ok) == [E1C, UNDER]
    with pytest.raises(BadCertificate):
        fz.circuit_order(STACK, {E1C: 1, UNDER: 0})
    with pytest.raises(BadCertificate):
        fz.circuit_order(STACK, {E1C: 0})


def test_cycle_is_reported(monkeypatch):
    a = frozenset({R1, R2, R3})
    b = frozenset({R1, R2, (1, 1, -1)})
    monkeypatch.setattr(fz, "precedence_edges", lambda fan: {(a, b), (b, a)})
    with pytest.raises(NotFiltrable) as info:
        fz.circuit_order(STACK)
    cycle = info.value.cycle
    assert cycle[0] == cycle[-1] and set(cycle) == {a, b}


def _reaches_itself(n, edges):
    reach = [[(i, j) in edges for j in range(n)] for i in range(n)]
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    reach[i][j] = reach[i][j] or reach[k][j]
    return any(reach[i][i] for i in range(n))


@settings(max_examples=150)
@given(st.integers(1, 6).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=12),
    )
))
def test_order_matches_transitive_closure(graph):
    n, raw = graph
    edges = {(i, j) for i, j in raw if i != j}
    nodes = [frozenset({(i, 1, 0), (0, 1, i)}) for i in range(n)]
    with pytest.MonkeyPatch.context() as mp:
        mp.setattr(fz, "circuits", lambda fan: fn.sorted_cones(nodes))
        mp.setattr(fz, "precedence_edges", lambda fan: {(nodes[i], nodes[j]) for i, j in edges})
        if _reaches_itself(n, edges):
            with pytest.raises(NotFiltrable) as info:
                fz.circuit_order(STACK)
            cycle = info.value.cycle
            assert cycle[0] == cycle[-1]
            index = {c: i for i, c in enumerate(nodes)}
            assert all((index[x], index[y]) in edges for x, y in zip(cycle, cycle[1:]))
        else:
            position = {c: k for k, c in enumerate(fz.circuit_order(STACK))}
            assert len(position) == n
            assert all(position[nodes[i]] < position[nodes[j]] for i, j in edges)


def test_elementary_step_errors():
    with pytest.raises(NotMinimal):
        fz.elementary_step(STACK, UNDER)
    with pytest.raises(NotACircuit):
        fz.elementary_step(STACK, frozenset({R1, R2}))
    sing = fn.fan_from_cones(3, [[(1, 0, 0), (1, 2, 0), (1, 1, 1)]], True)
    with pytest.raises(NotPiNonsingular):
        fz.elementary_step(sing, sing.cones[0])


def test_factorize_desingularizes_first():
    sing = fn.fan_from_cones(3, [[(1, 0, 0), (1, 2, 0), (1, 1, 1)]], True)
    steps, report = fz.factorize(sing)
    assert report.desingularized and report.chain_consistent
    assert all(fz.verify_step(s) == [] for s in steps)
    lower, upper = fz.boundary_fans(sing)
    assert fn.refines(report.initial_lower, lower)
    assert fn.refines(report.final_upper, upper)


@pytest.mark.parametrize(
    "weights, order, alpha, minus, plus",
    [
        ([-1, -1, 1, 1], (-1, -1, 1, 1), 2, (1, 1), (1, 1)),
        ([2, 1, -1], (-1, 2, 1), 1, None, None),
        ([-1, -2, 3], (-1, -2, 3), 2, (1, 2), None),
    ],
)
def test_from_weights(weights, order, alpha, minus, plus):
    rep = fz.from_weights(weights)
    assert rep.weights == order and rep.alpha_split == alpha
    assert rep.fiber_weights_minus == minus and rep.fiber_weights_plus == plus
    (cone,) = rep.cobordism.cones
    # the change of coordinates sends the weight vector to ν
    rays = sorted(cone)
    assert abs(lat.determinant(rays)) == 1
    assert cb.is_circuit(cone)


def test_from_weights_flop_quotients():
    rep = fz.from_weights([-1, -1, 1, 1])
    assert len(rep.lower_quotient_fan) == len(rep.upper_quotient_fan) == 2
    assert rep.lower_quotient_fan != rep.upper_quotient_fan
    assert rep.lower_quotient_fan.rays == rep.upper_quotient_fan.rays


@pytest.mark.parametrize("weights", [[2, 4, -2], [1, 2], [-1, -3], [1, 0, -1], [3]])
def test_from_weights_rejects(weights):
    with pytest.raises(BadWeights):
        fz.from_weights(weights)


def _random_center(rng, fan):
    # a ray center gives an isomorphism, so only faces of dimension ≥ 2 count
    faces = sorted((c for c in fan.all_cones if len(c) >= 2), key=fn.cone_key)
    return rng.choice(faces)


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_blowup_round_trip_property(seed):
    rng = random.Random(seed)
    fan = gen.random_smooth_fan(rng, rng.randint(2, 3))
    center = _random_center(rng, fan)
    steps, _ = fz.factorize(fz.cobordism_of_blowup(fan, center))
    nondeg = [s for s in steps if not s.degenerate]
    assert len(nondeg) == 1
    (step,) = nondeg
    assert step.upper_center == center
    assert step.lower_fan == fn.star_subdivide(fan, lat.lincomb([1] * len(center), sorted(center)))
    assert fz.verify_step(step) == []


@settings(max_examples=20)
@given(st.integers(0, 10**6))
def test_steps_of_random_plane_cobordisms(seed):
    rng = random.Random(seed)
    fan = gen.random_factorizable_fan(rng, n_rank=2)
    try:
        steps, report = fz.factorize(fan)
    except NotFiltrable:
        pytest.fail("two-dimensional quotients should always be orderable")
    assert report.chain_consistent
    for s in steps:
        assert fn.star_subdivide(s.lower_fan, s.v) == fn.star_subdivide(s.upper_fan, s.v)
        for center in (s.lower_center, s.upper_center):
            assert lat.lincomb([1] * len(center), sorted(center)) == s.v
            assert fn.is_smooth(center)


def test_factorize_rejects_cobordism_without_quotients():
    fan = gen.random_cobordism_fan(random.Random(12), n_rank=2)
    with pytest.raises(ProjectionNotAFan):
        fz.factorize(fan)
