"""π-structures on cobordism fans in N⁺ = N ⊕ Z.

The last coordinate is the ν direction and π drops it. Cones are frozensets
of primitive rays; per-cone results are cached on the ray set.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd
from typing import NamedTuple

from . import fan as fn
from . import lattice as lat
from .errors import InternalInvariant, NotACircuit, NotAFace, PiIndependent, VerticalRay


class RayPiData(NamedTuple):
    v: tuple
    w: Fraction
    c: int


class PiProfile(NamedTuple):
    mult: int
    b: int
    k: int
    r: int


class FanProfile(NamedTuple):
    g: PiProfile
    s: int


@dataclass(frozen=True)
class DependenceData:
    rays: tuple  # sorted ray vectors of the cone
    r: tuple  # Fractions, one per ray
    ray_pi: tuple

    def coefficient(self, ray):
        return self.r[self.rays.index(ray)]

    def _where(self, pred):
        return frozenset(ray for ray, x in zip(self.rays, self.r) if pred(x))

    @property
    def I1(self):
        return self._where(lambda x: x == 1)

    @property
    def Im1(self):
        return self._where(lambda x: x == -1)

    @property
    def Iplus(self):
        return self._where(lambda x: x > 0)

    @property
    def Iminus(self):
        return self._where(lambda x: x < 0)

    @property
    def support(self):
        return self._where(lambda x: x != 0)

    def counts(self):
        """``(i1, i-1, i+, i-)``."""
        return len(self.I1), len(self.Im1), len(self.Iplus), len(self.Iminus)


def ray_pi_data(rho):
    p = fn.project(rho)
    c = reduce(gcd, p, 0)
    if c == 0:
        raise VerticalRay(f"ray {rho} is vertical")
    return RayPiData(tuple(x // c for x in p), Fraction(rho[-1], c), c)


def pi_data(cone):
    return [ray_pi_data(r) for r in sorted(cone)]


def projections(cone):
    return [ray_pi_data(r).v for r in sorted(cone)]


@lru_cache(maxsize=1 << 18)
def is_pi_independent(cone):
    if not cone:
        return True
    return lat.rank(projections(cone)) == len(cone)


@lru_cache(maxsize=1 << 18)
def dependence_relation(cone):
    cone = frozenset(cone)
    rays = tuple(sorted(cone))
    data = tuple(ray_pi_data(r) for r in rays)
    kernel = lat.rational_kernel([d.v for d in data])
    if not kernel:
        raise PiIndependent(f"cone {list(rays)} is π-independent")
    if len(kernel) > 1:
        raise InternalInvariant(f"simplicial cone {list(rays)} has a {len(kernel)}-dim π-kernel")
    k = kernel[0]
    m = max(abs(x) for x in k)
    k = [x / m for x in k]
    s = sum(x * d.w for x, d in zip(k, data))
    if s == 0:
        raise InternalInvariant(f"dependence relation of {list(rays)} has zero weight")
    if s < 0:
        k = [-x for x in k]
    return DependenceData(rays, tuple(k), data)


def circuit_of(cone):
    return dependence_relation(frozenset(cone)).support


def is_circuit(cone):
    cone = frozenset(cone)
    if is_pi_independent(cone):
        return False
    return all(x != 0 for x in dependence_relation(cone).r)


@lru_cache(maxsize=1 << 18)
def pi_multiplicity(cone):
    if is_pi_independent(cone):
        return lat.lattice_index(projections(cone)) if cone else 1
    dep = dependence_relation(cone)
    return max(pi_multiplicity(cone - {ray}) for ray in dep.support)


@lru_cache(maxsize=1 << 18)
def pi_profile(cone):
    m = pi_multiplicity(cone)
    if is_pi_independent(cone):
        return PiProfile(m, 0, 0, 0)
    i1, im1, ip, im = dependence_relation(cone).counts()
    if i1 + im1 >= 2:
        return PiProfile(m, 1, ip + im, i1 + im1)
    return PiProfile(m, 0, 0, 0)


def fan_profile(fan):
    profiles = [pi_profile(c) for c in fan.cones]
    g = max(profiles)
    return FanProfile(g, profiles.count(g))


def is_pi_nonsingular(fan):
    # every π-independent face lies in a π-independent facet counted by the
    # profile of some maximal cone, and π-mult only grows along inclusion
    return fan_profile(fan).g.mult == 1


def pi_singular_faces(cone):
    """π-independent faces of ``cone`` with π-mult > 1, canonical order."""
    return fn.sorted_cones(
        f for f in fn.faces(cone) if is_pi_independent(f) and pi_multiplicity(f) > 1
    )


def is_codefinite(tau, eta):
    tau, eta = frozenset(tau), frozenset(eta)
    if not tau <= eta:
        raise NotAFace(f"{sorted(tau)} is not a face of {sorted(eta)}")
    if is_pi_independent(eta):
        return True
    dep = dependence_relation(eta)
    signs = [dep.coefficient(r) for r in tau]
    return all(x >= 0 for x in signs) or all(x <= 0 for x in signs)


def nu(rank):
    return (0,) * (rank - 1) + (1,)


def _flow_blockers(cone, direction):
    """Rays whose coefficient in ``direction`` (in span of cone) is negative.

    A face γ of ``cone`` lets ``direction`` escape into ``cone + span γ`` iff
    it contains all of them. Returns None when ``direction`` is not in the span.
    """
    a = fn.coefficients(cone, direction)
    if a is None:
        return None
    return frozenset(r for r, x in zip(sorted(cone), a) if x < 0)


def _faces_by_maximal(fan):
    owners = {}
    for c in fan.cones:
        for f in fn.faces(c):
            owners.setdefault(f, []).append(c)
    return owners


def _boundary(fan, direction):
    owners = _faces_by_maximal(fan)
    blockers = {c: _flow_blockers(c, direction) for c in fan.cones}
    good = set()
    for f, cones in owners.items():
        if not is_pi_independent(f):
            continue
        if all(blockers[c] is None or not blockers[c] <= f for c in cones):
            good.add(f)
    return {f for f in good if not any(f < g for g in good)}


def boundaries(fan):
    """Maximal faces of the lower and upper boundary, as ``(lower, upper)``.

    γ is upper when no maximal cone σ ⊇ γ has −ν in σ + span γ, so moving
    along ν from relint γ stays inside the support and moving against it
    leaves; lower is the same with +ν.
    """
    n = nu(fan.ambient_rank)
    minus = tuple(-x for x in n)
    return _boundary(fan, n), _boundary(fan, minus)


def dual_basis_boundaries(cone):
    """Facets of a full-dimensional cone split by the sign of ⟨u_j, ν⟩.

    ``u_j`` is the dual basis, so ⟨u_j, ν⟩ is the coefficient of ρ_j in ν.
    Returns ``(lower, upper)`` facet sets.
    """
    rays = sorted(cone)
    a = lat.solve_in_span(rays, nu(len(rays[0])))
    lower = {frozenset(cone) - {r} for r, x in zip(rays, a) if x < 0}
    upper = {frozenset(cone) - {r} for r, x in zip(rays, a) if x > 0}
    return lower, upper


def signed_vector(circuit, sign):
    """``v₊`` or ``v₋``: the sum of the v_i over I₊ or I₋."""
    dep = dependence_relation(frozenset(circuit))
    side = dep.Iplus if sign > 0 else dep.Iminus
    dim = len(dep.ray_pi[0].v)
    total = (0,) * dim
    for ray, d in zip(dep.rays, dep.ray_pi):
        if ray in side:
            total = lat.add(total, d.v)
    return total


def lift_signed_vector(circuit, sign):
    """Canonical lattice ray ``ρ±`` in relint(circuit) over ``v±``; returns ``(ρ, e)``.

    The fiber of the circuit over the ray Q≥0·v± is a 2-dimensional cone;
    ρ± is the primitive sum of its two primitive extremal rays.
    """
    circuit = frozenset(circuit)
    if not is_circuit(circuit):
        raise NotACircuit(f"{sorted(circuit)} is not a circuit")
    dep = dependence_relation(circuit)
    side = dep.Iplus if sign > 0 else dep.Iminus
    vpm = signed_vector(circuit, sign)
    _, e = lat.primitive(vpm)
    # points of the fiber at height v±: mu_i = [i in side] + t r_i >= 0
    base = [Fraction(int(ray in side)) for ray in dep.rays]
    lo = max(-b / x for b, x in zip(base, dep.r) if x > 0)
    hi = min(b / -x for b, x in zip(base, dep.r) if x < 0)
    ends = []
    for t in (lo, hi):
        mu = [b + t * x for b, x in zip(base, dep.r)]
        point = [Fraction(0)] * len(dep.rays[0])
        for m, ray, d in zip(mu, dep.rays, dep.ray_pi):
            for j, y in enumerate(ray):
                point[j] += m * y / d.c
        ends.append(lat.integer_vector(point))
    rho = lat.primitive(lat.add(*ends))[0]
    return rho, e


def pos_neg_star_subdivide(fan, circuit, sign):
    circuit = frozenset(circuit)
    if circuit not in fan.all_cones:
        raise NotAFace(f"{sorted(circuit)} is not a cone of the fan")
    rho, e = lift_signed_vector(circuit, sign)
    return fn.star_subdivide(fan, rho), rho, e
