"""Elementary cobordisms of a π-nonsingular cobordism fan and the resulting
chain of blowups and blowdowns between its two quotient fans.

Also builds the two standard cobordisms: the one attached to the blowup of a
smooth fan along a smooth cone, and the one of a weighted K*-action on affine
space.
"""

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from functools import reduce

from . import cobordism as cb
from . import desing as ds
from . import fan as fn
from . import lattice as lat
from .errors import (
    BadCertificate,
    BadWeights,
    InternalInvariant,
    NonSimplicialCone,
    NotACircuit,
    NotAFace,
    NotFaceToFace,
    NotFiltrable,
    NotMinimal,
    NotPiNonsingular,
    NotSmoothCenter,
    ProjectionNotAFan,
)


@dataclass(frozen=True)
class FactorizationStep:
    circuit: frozenset
    v: tuple
    lower_fan: fn.Fan
    upper_fan: fn.Fan
    middle_fan: fn.Fan
    lower_center: frozenset
    upper_center: frozenset
    lower_degenerate: bool
    upper_degenerate: bool

    @property
    def degenerate(self):
        return self.lower_degenerate and self.upper_degenerate


@dataclass
class FactorizationReport:
    desingularized: bool = False
    desing_iterations: int = 0
    initial_lower: fn.Fan = None
    final_upper: fn.Fan = None
    centers_smooth: list = field(default_factory=list)
    chain_consistent: bool = True

    def nondegenerate_steps(self, steps):
        return sum(1 for s in steps if not s.degenerate)


@dataclass(frozen=True)
class WeightActionReport:
    weights: tuple
    alpha_split: int
    cobordism: fn.Fan
    lower_quotient_fan: fn.Fan
    upper_quotient_fan: fn.Fan
    fiber_weights_minus: tuple = None
    fiber_weights_plus: tuple = None


def _projected_fan(rank, faces, validate_level):
    cones = [[cb.ray_pi_data(r).v for r in f] for f in faces]
    try:
        return fn.fan_from_cones(rank, cones, False, validate_level)
    except (NotFaceToFace, NonSimplicialCone) as exc:
        raise ProjectionNotAFan(f"projected boundary is not a fan: {exc}") from exc


def boundary_fans(cobfan, validate_level="full"):
    """``(π(∂₋), π(∂₊))`` as fans in N."""
    lower, upper = cb.boundaries(cobfan)
    rank = cobfan.ambient_rank - 1
    return (
        _projected_fan(rank, lower, validate_level),
        _projected_fan(rank, upper, validate_level),
    )


def circuits(cobfan):
    found = {
        cb.circuit_of(c) for c in cobfan.cones if not cb.is_pi_independent(c)
    }
    return fn.sorted_cones(found)


def _entering_faces(cone, direction):
    """Faces γ of ``cone`` with ``direction`` ∈ cone + span γ, dimension ≥ 1."""
    blockers = cb._flow_blockers(cone, direction)
    if blockers is None:
        return []
    rest = sorted(cone - blockers)
    out = []
    for f in fn.faces(frozenset(rest), include_empty=True):
        face = f | blockers
        if face:
            out.append(face)
    return out


def precedence_edges(cobfan):
    """Pairs ``(σ, σ')`` of distinct circuits with σ ≺₁ σ'.

    σ ≺₁ σ' when the vertical flow crosses a common face of dimension ≥ 1
    from a cone of Star(σ), lying on its +ν side, into a cone of Star(σ'),
    lying on its −ν side.
    """
    n = cb.nu(cobfan.ambient_rank)
    minus = tuple(-x for x in n)
    above = {}
    below = {}
    for c in cobfan.cones:
        if cb.is_pi_independent(c):
            continue
        sigma = cb.circuit_of(c)
        for face in _entering_faces(c, n):
            above.setdefault(face, set()).add(sigma)
        for face in _entering_faces(c, minus):
            below.setdefault(face, set()).add(sigma)
    edges = set()
    for face, tops in above.items():
        for s in tops:
            for t in below.get(face, ()):
                if s != t:
                    edges.add((s, t))
    return edges


def _find_cycle(nodes, edges):
    succ = {v: [] for v in nodes}
    for a, b in edges:
        succ[a].append(b)
    for v in succ:
        succ[v].sort(key=fn.cone_key)
    state = {}
    for start in fn.sorted_cones(nodes):
        if start in state:
            continue
        stack = [(start, iter(succ[start]))]
        path = [start]
        state[start] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
                path.pop()
            elif state.get(nxt) == 1:
                return path[path.index(nxt):] + [nxt]
            elif nxt not in state:
                state[nxt] = 1
                stack.append((nxt, iter(succ[nxt])))
                path.append(nxt)
    return []


def circuit_order(cobfan, certificate=None):
    """Circuits in an order compatible with ≺₁.

    Without a certificate: Kahn's algorithm, ties broken canonically. With a
    certificate (a rational weight per circuit, keyed by the circuit's ray
    set) the weights must increase along every edge and then dictate the
    order.
    """
    nodes = circuits(cobfan)
    edges = precedence_edges(cobfan)
    if certificate is not None:
        weights = {frozenset(k): Fraction(v) for k, v in certificate.items()}
        missing = [c for c in nodes if c not in weights]
        if missing:
            raise BadCertificate(f"no weight for circuit {sorted(missing[0])}")
        for a, b in sorted(edges, key=lambda e: (fn.cone_key(e[0]), fn.cone_key(e[1]))):
            if not weights[a] < weights[b]:
                raise BadCertificate(
                    f"weights do not increase from {sorted(a)} to {sorted(b)}"
                )
        return sorted(nodes, key=lambda c: (weights[c], fn.cone_key(c)))
    indegree = {c: 0 for c in nodes}
    succ = {c: [] for c in nodes}
    for a, b in edges:
        succ[a].append(b)
        indegree[b] += 1
    heap = [(fn.cone_key(c), i, c) for i, c in enumerate(nodes) if indegree[c] == 0]
    rank = {c: i for i, c in enumerate(nodes)}
    heapq.heapify(heap)
    order = []
    while heap:
        _, _, c = heapq.heappop(heap)
        order.append(c)
        for d in succ[c]:
            indegree[d] -= 1
            if indegree[d] == 0:
                heapq.heappush(heap, (fn.cone_key(d), rank[d], d))
    if len(order) != len(nodes):
        cycle = _find_cycle(nodes, edges)
        raise NotFiltrable(
            "precedence between circuits has a cycle: "
            + " -> ".join(str(sorted(c)) for c in cycle),
            cycle,
        )
    return order


def _remove_star(cobfan, sigma):
    """Drop every cone containing σ and the faces of its star lying on its
    −ν side, keeping the faces on its +ν side."""
    star = [c for c in cobfan.cones if sigma <= c]
    keep = [c for c in cobfan.cones if not sigma <= c]
    star_fan = fn.with_cones(cobfan, star)
    _, upper = cb.boundaries(star_fan)
    return fn.with_cones(cobfan, keep + sorted(upper, key=fn.cone_key))


def _center(rays):
    return frozenset(cb.ray_pi_data(r).v for r in rays)


def elementary_step(cobfan, sigma, check_minimal=True, validate_level="light", lower_fan=None):
    """One elementary cobordism; returns ``(step, remaining_fan)``.

    ``lower_fan`` may pass in π(∂₋) of ``cobfan`` when the caller already has it.
    """
    sigma = frozenset(sigma)
    if not cb.is_circuit(sigma) or not any(sigma <= c for c in cobfan.cones):
        raise NotACircuit(f"{sorted(sigma)} is not a circuit of the fan")
    if not cb.is_pi_nonsingular(cobfan):
        raise NotPiNonsingular("elementary steps need a π-nonsingular fan")
    if check_minimal:
        before = [a for a, b in precedence_edges(cobfan) if b == sigma]
        if before:
            raise NotMinimal(f"{sorted(before[0])} precedes {sorted(sigma)}")
    dep = cb.dependence_relation(sigma)
    v = cb.signed_vector(sigma, 1)
    if v != cb.signed_vector(sigma, -1):
        raise InternalInvariant(f"v₊ ≠ v₋ for the π-nonsingular circuit {sorted(sigma)}")
    remaining = _remove_star(cobfan, sigma)
    if lower_fan is None:
        lower_fan, _ = boundary_fans(cobfan, validate_level)
    upper_fan, _ = boundary_fans(remaining, validate_level)
    middle = fn.star_subdivide(lower_fan, v)
    step = FactorizationStep(
        circuit=sigma,
        v=v,
        lower_fan=lower_fan,
        upper_fan=upper_fan,
        middle_fan=middle,
        lower_center=_center(dep.Iplus),
        upper_center=_center(dep.Iminus),
        lower_degenerate=len(dep.Iplus) == 1,
        upper_degenerate=len(dep.Iminus) == 1,
    )
    return step, remaining


def verify_step(step):
    """Invariant failures of one step, as a list of messages."""
    problems = []
    if fn.star_subdivide(step.upper_fan, step.v) != step.middle_fan:
        problems.append("star subdivisions of the two sides at v differ")
    if fn.star_subdivide(step.lower_fan, step.v) != step.middle_fan:
        problems.append("middle fan is not the subdivision of the lower fan")
    for name, center in (("lower", step.lower_center), ("upper", step.upper_center)):
        if not fn.is_smooth(center):
            problems.append(f"{name} center is not smooth")
        if lat.lincomb([1] * len(center), sorted(center)) != tuple(step.v):
            problems.append(f"v is not the sum of the {name} center's rays")
    return problems


def factorize(cobfan, certificate=None, config=ds.DesingConfig(), validate_level="light"):
    """Chain of elementary steps from π(∂₋) to π(∂₊); returns ``(steps, report)``."""
    report = FactorizationReport()
    # both quotients must exist; refinement keeps this, so checking the input suffices
    boundary_fans(cobfan, "full")
    if not cb.is_pi_nonsingular(cobfan):
        cobfan, trace = ds.pi_desingularize(cobfan, config)
        report.desingularized = True
        report.desing_iterations = len(trace.iteration_profiles)
    report.initial_lower, report.final_upper = boundary_fans(cobfan, validate_level)
    order = circuit_order(cobfan, certificate)
    steps = []
    current, lower = cobfan, report.initial_lower
    for sigma in order:
        # removing a minimal star keeps the remaining circuits in order
        step, current = elementary_step(current, sigma, False, validate_level, lower)
        lower = step.upper_fan
        steps.append(step)
        report.centers_smooth.append(
            fn.is_smooth(step.lower_center) and fn.is_smooth(step.upper_center)
        )
    # the last quotient reached must be π(∂₊) of the input, and no circuit may remain
    report.chain_consistent = lower == report.final_upper and not circuits(current)
    return steps, report


def _describe(center):
    rays = ", ".join(str(r) for r in sorted(center))
    if len(center) == len(next(iter(center))):
        return f"of origin V(<{rays}>)"
    return f"along V(<{rays}>)"


def summary_lines(steps):
    """One line per step, read from the lower quotient to the upper one."""
    lines = []
    for i, s in enumerate(steps, 1):
        if s.degenerate:
            text = "isomorphism"
        elif s.lower_degenerate:
            text = f"blowup {_describe(s.upper_center)}: lower fan = blowup of upper fan"
        elif s.upper_degenerate:
            text = f"blowup {_describe(s.lower_center)}: upper fan = blowup of lower fan"
        else:
            text = (
                f"blowup {_describe(s.lower_center)}, "
                f"then blowdown {_describe(s.upper_center)}"
            )
        lines.append(f"step {i}: {text}")
    return lines


def cobordism_of_blowup(fan, center):
    """Cobordism fan whose quotients are ``fan`` (upper) and its blowup along
    the smooth cone ``center`` (lower)."""
    if fan.is_cobordism:
        raise NotSmoothCenter("expected a fan in N, not a cobordism fan")
    center = frozenset(lat.primitive(r)[0] for r in center)
    if not center or not any(center <= c for c in fan.cones):
        raise NotAFace(f"{sorted(center)} is not a cone of the fan")
    if not fn.is_smooth(center):
        raise NotSmoothCenter(f"{sorted(center)} is not smooth")
    rank = fan.ambient_rank + 1
    nu = cb.nu(rank)
    lifted = [[tuple(r) + (0,) for r in c] + [nu] for c in fan.cones]
    cylinder = fn.fan_from_cones(rank, lifted)
    rho = tuple(lat.lincomb([1] * len(center), sorted(center))) + (1,)
    cylinder = fn.star_subdivide(cylinder, rho)
    kept = [c - {nu} for c in cylinder.cones]
    return fn.fan_from_cones(rank, kept, is_cobordism=True)


def from_weights(weights):
    """Standard cobordism of the K*-action with the given weights on affine space.

    Negative weights are moved first (stable order). The fiber weight lists
    are reported only when 2 ≤ α ≤ n; the positive one is omitted when it has
    a single entry.
    """
    a = [int(x) for x in weights]
    if len(a) < 2 or reduce(gcd, a, 0) != 1:
        raise BadWeights("weights must be at least two coprime integers")
    if any(x == 0 for x in a):
        raise BadWeights("weights must be nonzero")
    if not any(x < 0 for x in a) or not any(x > 0 for x in a):
        raise BadWeights("weights need both signs")
    a = [x for x in a if x < 0] + [x for x in a if x > 0]
    alpha = sum(1 for x in a if x < 0)
    n = len(a) - 1
    # basis (b_1, ..., b_n, a) of Z^{n+1}; its inverse sends a to ν
    basis = lat.complete_to_basis([a])
    columns = [list(b) for b in basis] + [a]
    matrix = [[columns[c][r] for c in range(n + 1)] for r in range(n + 1)]
    inverse = lat.unimodular_inverse(matrix)
    rays = [tuple(inverse[r][c] for r in range(n + 1)) for c in range(n + 1)]
    cone_fan = fn.fan_from_cones(n + 1, [rays], is_cobordism=True)
    lower, upper = boundary_fans(cone_fan)
    minus = plus = None
    if 2 <= alpha <= n:
        minus = tuple(-x for x in a[:alpha])
        if n + 1 - alpha >= 2:
            plus = tuple(a[alpha:])
    return WeightActionReport(tuple(a), alpha, cone_fan, lower, upper, minus, plus)
