"""π-desingularization of cobordism fans by star subdivisions.

Each outer iteration selects a maximal cone of maximal π-profile, possibly
applies a ± subdivision of its circuit, repairs codefiniteness of a chosen
π-singular face τ in every cone containing it, then subdivides at a lift of
a point of par(π(τ)). The fan profile must strictly drop every iteration.
"""

import heapq
from collections import defaultdict
from dataclasses import dataclass, field

from . import cobordism as cb
from . import fan as fn
from . import lattice as lat
from .errors import (
    AlreadyNonsingular,
    DimensionTooSmall,
    InternalInvariant,
    InvalidInput,
    IterationCapExceeded,
    NotACircuit,
)

PROP_A = "prop-fondamentale-A"
PROP_B = "prop-fondamentale-B"
PROP_FINALE = "prop-finale"
PAR = "par-subdivision"


PAR_CHOICES = ("lexmin", "balanced")


@dataclass(frozen=True)
class DesingConfig:
    max_iterations: int = 10000
    max_repair_steps: int = 10000
    par_choice: str = "balanced"

    def __post_init__(self):
        if self.par_choice not in PAR_CHOICES:
            raise InvalidInput(f"unknown par choice {self.par_choice!r}")


@dataclass(frozen=True)
class TraceEntry:
    step_kind: str
    center_ray: tuple
    fan_profile_after: cb.FanProfile
    outer_iteration: int

    def to_json(self):
        g, s = self.fan_profile_after
        return {
            "step_kind": self.step_kind,
            "center_ray": list(self.center_ray),
            "fan_profile_after": {"g": list(g), "s": s},
            "outer_iteration": self.outer_iteration,
        }


@dataclass
class DesingTrace:
    entries: list = field(default_factory=list)
    iteration_profiles: list = field(default_factory=list)
    nonsingular_cones_split: list = field(default_factory=list)

    def record(self, kind, rho, work, iteration):
        self.entries.append(TraceEntry(kind, tuple(rho), work.profile(), iteration))

    def __len__(self):
        return len(self.entries)


def _ray_order(cone):
    # matches the order of Fan.cones
    return sorted(cone)


class WorkingFan:
    """Mutable copy of a fan indexed by ray and by π-profile.

    Star subdivisions only touch the cones containing the carrier of the new
    ray, and the fan profile is read from a lazily cleaned max-heap, so an
    outer iteration costs time proportional to the stars it changes.
    """

    def __init__(self, fan):
        self.rank = fan.ambient_rank
        self.is_cobordism = fan.is_cobordism
        self.by_ray = defaultdict(set)
        self.by_profile = defaultdict(set)
        self._heap = []
        for c in fan.cones:
            self._add(c)

    def _add(self, cone):
        for r in cone:
            self.by_ray[r].add(cone)
        p = cb.pi_profile(cone)
        bucket = self.by_profile[p]
        if not bucket:
            heapq.heappush(self._heap, tuple(-x for x in p))
        bucket.add(cone)

    def _remove(self, cone):
        for r in cone:
            owners = self.by_ray[r]
            owners.discard(cone)
            if not owners:
                del self.by_ray[r]
        self.by_profile[cb.pi_profile(cone)].discard(cone)

    def __contains__(self, cone):
        return cone in self.by_profile.get(cb.pi_profile(cone), ())

    def cones(self):
        return [c for bucket in self.by_profile.values() for c in bucket]

    def __len__(self):
        return sum(len(b) for b in self.by_profile.values())

    def profile(self):
        while self._heap:
            g = cb.PiProfile(*(-x for x in self._heap[0]))
            if self.by_profile.get(g):
                return cb.FanProfile(g, len(self.by_profile[g]))
            heapq.heappop(self._heap)
            self.by_profile.pop(g, None)
        return cb.FanProfile(cb.PiProfile(1, 0, 0, 0), 0)

    def is_pi_nonsingular(self):
        return self.profile().g.mult == 1

    def first_cone_with_profile(self, g):
        return min(self.by_profile[g], key=_ray_order)

    def containing(self, face):
        """Maximal cones containing ``face``, in canonical order."""
        face = list(face)
        if not face:
            return sorted(self.cones(), key=_ray_order)
        pools = sorted((self.by_ray.get(r, set()) for r in face), key=len)
        found = set(pools[0]).intersection(*pools[1:])
        return sorted(found, key=_ray_order)

    def star_subdivide(self, rho, carrier):
        """Subdivide at ``rho``, which must lie in the relative interior of ``carrier``."""
        rho = lat.primitive(rho)[0]
        if rho in self.by_ray:
            return
        carrier = frozenset(carrier)
        hit = self.containing(carrier)
        if not hit or fn.carrier(hit[0], rho) != carrier:
            raise InternalInvariant(
                f"{rho} is not in the relative interior of a cone {sorted(carrier)}"
            )
        for c in hit:
            self._remove(c)
            for piece in fn.subdivide_cone(c, rho):
                fn._check_cone(piece, self.is_cobordism)
                self._add(piece)

    def to_fan(self):
        return fn._assemble(self.rank, self.cones(), self.is_cobordism)


@dataclass(frozen=True)
class Selection:
    eta: frozenset
    circuit: frozenset = None
    branch: str = "direct"
    gamma: frozenset = None
    tau: frozenset = None
    v: tuple = None
    rho: tuple = None


def lift_to_span(tau, v):
    """Primitive lattice ray through the unique point of span τ over ``v``."""
    data = cb.pi_data(tau)
    a = lat.solve_in_span([d.v for d in data], v)
    height = sum(x * d.w for x, d in zip(a, data))
    return lat.integer_vector(list(v) + [height])


def minimal_singular_face(cone):
    """A π-independent face of minimal dimension with π-mult > 1."""
    sing = cb.pi_singular_faces(cone)
    if not sing:
        raise InternalInvariant(f"{sorted(cone)} has no π-singular face")
    return sing[0]


def choose_par_point(tau, par_choice="balanced"):
    """Point of par(π(τ)): lexicographically first, or the one whose largest
    barycentric coefficient is smallest (ties broken lexicographically)."""
    vs = cb.projections(tau)
    points = lat.enumerate_parallelepiped(vs)
    if not points:
        raise InternalInvariant(f"par of π({sorted(tau)}) is empty")
    if par_choice == "lexmin":
        return points[0]
    return min(points, key=lambda p: (max(lat.solve_in_span(vs, p)), p))


def _face_of_max_multiplicity(eta):
    dep = cb.dependence_relation(eta)
    facets = fn.sorted_cones(eta - {r} for r in dep.support)
    best = max(cb.pi_multiplicity(f) for f in facets)
    return next(f for f in facets if cb.pi_multiplicity(f) == best)


def _complete_selection(eta, gamma, circuit=None, branch="direct", par_choice="balanced"):
    tau = minimal_singular_face(gamma)
    v = choose_par_point(tau, par_choice)
    return Selection(eta, circuit, branch, gamma, tau, v, lift_to_span(tau, v))


def _working(fan):
    return fan if isinstance(fan, WorkingFan) else WorkingFan(fan)


def step1_select(fan, config=DesingConfig()):
    """Étape 1 choice without performing any subdivision.

    For a circuit of dimension > 2 the returned selection has branch
    ``"prop-fondamentale"`` and no γ/τ; the caller runs the ± subdivision.
    """
    work = _working(fan)
    if work.is_pi_nonsingular():
        raise AlreadyNonsingular("fan is already π-nonsingular")
    eta = work.first_cone_with_profile(work.profile().g)
    if cb.is_pi_independent(eta):
        return _complete_selection(eta, eta, par_choice=config.par_choice)
    circuit = cb.circuit_of(eta)
    if len(circuit) > 2:
        return Selection(eta, circuit, "prop-fondamentale")
    return _complete_selection(
        eta, _face_of_max_multiplicity(eta), circuit, par_choice=config.par_choice
    )


def _sign_order(circuit):
    dep = cb.dependence_relation(circuit)
    i1, im1, ip, im = dep.counts()
    if i1 + im1 == 1:
        return (1, -1) if i1 == 1 else (-1, 1)
    e_plus = lat.primitive(cb.signed_vector(circuit, 1))[1]
    e_minus = lat.primitive(cb.signed_vector(circuit, -1))[1]
    if e_plus > 1:
        return (1, -1)
    if e_minus > 1:
        return (-1, 1)
    if i1 >= 1 and not (im1 == 1 and im == 1):
        return (1, -1)
    return (-1, 1)


def classify_subdivision(circuit, rho):
    """Compare the pieces of ``circuit`` split at ``rho`` with the circuit.

    Returns ``("A", None, None)``, ``("B", κ', γ')`` or ``(None, None, None)``.
    """
    target = cb.pi_profile(circuit)
    pieces = fn.subdivide_cone(circuit, rho)
    profiles = [cb.pi_profile(p) for p in pieces]
    if all(p < target for p in profiles):
        return "A", None, None
    equal = [c for c, p in zip(pieces, profiles) if p == target]
    if len(equal) != 1 or any(p > target for p in profiles):
        return None, None, None
    kappa = equal[0]
    gamma = kappa - {rho}
    m = cb.pi_multiplicity(circuit)
    if (
        cb.is_pi_independent(gamma)
        and cb.pi_multiplicity(gamma) == m
        and cb.pi_multiplicity(kappa) == m
    ):
        return "B", kappa, gamma
    return None, None, None


def _prop_fondamentale(work, circuit):
    circuit = frozenset(circuit)
    if not cb.is_circuit(circuit):
        raise NotACircuit(f"{sorted(circuit)} is not a circuit")
    if len(circuit) <= 2:
        raise DimensionTooSmall("circuit has dimension at most 2")
    for sign in _sign_order(circuit):
        rho, _ = cb.lift_signed_vector(circuit, sign)
        case, kappa, gamma = classify_subdivision(circuit, rho)
        if case is not None:
            work.star_subdivide(rho, circuit)
            return case, kappa, gamma, rho
    raise InternalInvariant(
        f"neither ± subdivision of {sorted(circuit)} falls in case A or B"
    )


def prop_fondamentale_step(fan, circuit):
    """± subdivision of a circuit of dimension > 2 classified as case A or B.

    Returns ``(fan', case, κ', γ', ρ±)``.
    """
    work = WorkingFan(fan)
    case, kappa, gamma, rho = _prop_fondamentale(work, circuit)
    return work.to_fan(), case, kappa, gamma, rho


def _bad_cones(work, tau):
    return [c for c in work.containing(tau) if not cb.is_codefinite(tau, c)]


def _make_codefinite(work, tau, config, on_step=None):
    for _ in range(config.max_repair_steps):
        bad = _bad_cones(work, tau)
        if not bad:
            return
        circuit = cb.circuit_of(bad[0])
        if cb.pi_multiplicity(circuit) == 1:
            rho, _ = cb.lift_signed_vector(circuit, 1)
            work.star_subdivide(rho, circuit)
        else:
            _, _, _, rho = _prop_fondamentale(work, circuit)
        if on_step is not None:
            on_step(rho)
    raise IterationCapExceeded("codefiniteness repair did not terminate")


def make_codefinite(fan, tau, config=DesingConfig()):
    """Subdivide circuits around τ until τ is codefinite in every cone containing it.

    τ itself is never subdivided: every center lies in the relative interior
    of a circuit, which τ cannot contain.
    """
    work = WorkingFan(fan)
    _make_codefinite(work, frozenset(tau), config)
    return work.to_fan()


def _outer_iteration(work, trace, iteration, config):
    sel = step1_select(work, config)
    if sel.branch == "prop-fondamentale":
        case, kappa, gamma_p, rho = _prop_fondamentale(work, sel.circuit)
        if case == "A":
            trace.record(PROP_A, rho, work, iteration)
            return
        trace.record(PROP_B, rho, work, iteration)
        (dropped,) = sel.circuit - kappa
        gamma = sel.eta - {dropped}
        nu = gamma | {rho}
        if nu not in work:
            raise InternalInvariant("case B cone is not maximal after subdivision")
        sel = _complete_selection(
            nu, gamma, sel.circuit, "prop-fondamentale-B", config.par_choice
        )

    def log(rho):
        trace.record(PROP_FINALE, rho, work, iteration)

    _make_codefinite(work, sel.tau, config, log)
    if not work.containing(sel.tau):
        raise InternalInvariant("τ was destroyed by codefiniteness repair")
    bad = _bad_cones(work, sel.tau)
    if bad:
        raise InternalInvariant(f"τ is not codefinite in {sorted(bad[0])}")
    work.star_subdivide(sel.rho, sel.tau)
    trace.record(PAR, sel.rho, work, iteration)


def pi_desingularize(fan, config=DesingConfig()):
    """Refine a cobordism fan until every π-independent cone has π-mult 1.

    Returns ``(fan, trace)``. Raises InternalInvariant if an outer iteration
    fails to lower the fan profile.
    """
    trace = DesingTrace()
    work = WorkingFan(fan)
    iteration = 0
    while not work.is_pi_nonsingular():
        if iteration >= config.max_iterations:
            raise IterationCapExceeded(f"no π-nonsingular fan after {iteration} iterations")
        before = work.profile()
        _outer_iteration(work, trace, iteration, config)
        after = work.profile()
        if not after < before:
            raise InternalInvariant(f"profile did not drop: {before} -> {after}")
        trace.iteration_profiles.append(after)
        iteration += 1
    out = work.to_fan()
    trace.nonsingular_cones_split = [
        sorted(c) for c in fan.cones
        if cb.pi_multiplicity(c) == 1 and c not in out.cone_set
    ]
    return out, trace


def check_trace(trace):
    """Strict decrease of the per-iteration fan profiles."""
    p = trace.iteration_profiles
    return all(b < a for a, b in zip(p, p[1:]))
