"""Simplicial fans: construction, faces, stars, star subdivision, resolution.

A cone is handled as a ``frozenset`` of primitive ray vectors; a :class:`Fan`
stores its rays and maximal cones in canonical (sorted) form, so dataclass
equality is equality of fans.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations

from . import lattice as lat
from .errors import (
    NonSimplicialCone,
    NotAFace,
    NotFaceToFace,
    NotPiStrictlyConvex,
    OutsideSupport,
    VerticalRay,
    InvalidInput,
)

VALIDATE_LEVELS = ("light", "full")


@dataclass(frozen=True)
class Fan:
    ambient_rank: int
    rays: tuple
    maximal_cones: tuple
    is_cobordism: bool = False

    @cached_property
    def cones(self):
        """Maximal cones as frozensets of ray vectors, in canonical order."""
        return [frozenset(self.rays[i] for i in c) for c in self.maximal_cones]

    @cached_property
    def cone_set(self):
        return frozenset(self.cones)

    @cached_property
    def ray_set(self):
        return frozenset(self.rays)

    @cached_property
    def all_cones(self):
        """Every face of every maximal cone, the zero cone excluded."""
        out = set()
        for c in self.cones:
            out.update(faces(c))
        return out

    def dim(self):
        return max((len(c) for c in self.cones), default=0)

    def __len__(self):
        return len(self.maximal_cones)


def cone_key(cone):
    """Canonical sort key for a cone."""
    return (len(cone), sorted(cone))


def sorted_cones(cones):
    return sorted(cones, key=cone_key)


def faces(cone, include_empty=False):
    rays = sorted(cone)
    lo = 0 if include_empty else 1
    for k in range(lo, len(rays) + 1):
        for sub in combinations(rays, k):
            yield frozenset(sub)


def proper_faces(cone):
    return (f for f in faces(cone) if len(f) < len(cone))


def project(v):
    """Drop the last (ν) coordinate."""
    return tuple(v[:-1])


def is_pi_strictly_convex(cone):
    rays = sorted(cone)
    kernel = lat.rational_kernel([project(r) for r in rays])
    if not kernel:
        return True
    if len(kernel) > 1:
        return False
    k = kernel[0]
    return any(x > 0 for x in k) and any(x < 0 for x in k)


@lru_cache(maxsize=1 << 16)
def _check_cone(cone, is_cobordism):
    rays = sorted(cone)
    if lat.rank(rays) < len(rays):
        raise NonSimplicialCone(f"cone {rays} is not simplicial")
    if is_cobordism and not is_pi_strictly_convex(cone):
        raise NotPiStrictlyConvex(f"cone {rays} is not π-strictly convex")


def cones_meet_properly(c1, c2):
    """True iff the simplicial cones meet exactly in their common face."""
    common = c1 & c2
    s1 = sorted(c1)
    s2 = sorted(c2)
    if not (c1 - common) or not (c2 - common):
        return True
    dim = len(s1[0])
    a_eq = []
    for j in range(dim):
        a_eq.append([r[j] for r in s1] + [-r[j] for r in s2])
    a_eq.append([int(r not in common) for r in s1] + [int(r not in common) for r in s2])
    b_eq = [0] * dim + [1]
    return lat.exact_feasible(a_eq, b_eq) is None


def check_face_to_face(cones):
    cones = list(cones)
    for c1, c2 in combinations(cones, 2):
        if not cones_meet_properly(c1, c2):
            raise NotFaceToFace(f"cones {sorted(c1)} and {sorted(c2)} overlap")


def fan_from_cones(rank, cones, is_cobordism=False, validate_level="light"):
    """Build a canonical fan from cones given as iterables of ray vectors.

    Rays are made primitive; cones that are faces of other listed cones are
    dropped.
    """
    if validate_level not in VALIDATE_LEVELS:
        raise InvalidInput(f"unknown validate level {validate_level!r}")
    normalized = set()
    for c in cones:
        rays = []
        for r in c:
            if len(r) != rank:
                raise InvalidInput(f"ray {tuple(r)} does not have length {rank}")
            rays.append(lat.primitive(r)[0])
        cone = frozenset(rays)
        if len(cone) != len(rays):
            raise NonSimplicialCone(f"cone {rays} repeats a ray")
        if not cone:
            continue
        normalized.add(cone)
    covered = set()
    for d in normalized:
        covered.update(f for f in faces(d) if len(f) < len(d))
    maximal = [c for c in normalized if c not in covered]
    ray_vecs = sorted({r for c in maximal for r in c})
    if is_cobordism:
        for r in ray_vecs:
            if not any(project(r)):
                raise VerticalRay(f"ray {r} is vertical")
    for c in maximal:
        _check_cone(c, is_cobordism)
    if validate_level == "full":
        check_face_to_face(maximal)
    return _assemble(rank, maximal, is_cobordism)


def _assemble(rank, maximal, is_cobordism):
    """Fan from cones already known to be primitive, valid and maximal."""
    ray_vecs = sorted({r for c in maximal for r in c})
    index = {r: i for i, r in enumerate(ray_vecs)}
    idx_cones = sorted(tuple(sorted(index[r] for r in c)) for c in maximal)
    return Fan(rank, tuple(ray_vecs), tuple(idx_cones), bool(is_cobordism))


def make_fan(rank, rays, maximal_cones, is_cobordism=False, validate_level="light"):
    rays = [lat.vec(r) for r in rays]
    cones = []
    for c in maximal_cones:
        for i in c:
            if not 0 <= i < len(rays):
                raise InvalidInput(f"ray index {i} out of range")
        cones.append([rays[i] for i in c])
    return fan_from_cones(rank, cones, is_cobordism, validate_level)


def with_cones(fan, cones, validate_level="light"):
    return fan_from_cones(fan.ambient_rank, cones, fan.is_cobordism, validate_level)


def multiplicity(cone):
    return lat.lattice_index(sorted(cone))


def is_smooth(cone):
    return multiplicity(cone) == 1


@lru_cache(maxsize=1 << 16)
def _frame(cone):
    """Integer data solving ``x = sum a_i ρ_i`` for the sorted rays of ``cone``.

    Returns ``(rows, adj, det, annihilators)``: ``a = adj · x[rows] / det``
    whenever every annihilator is orthogonal to ``x``.
    """
    rays = sorted(cone)
    k, dim = len(rays), len(rays[0])
    for rows in combinations(range(dim), k):
        sq = [[rays[c][r] for c in range(k)] for r in rows]
        det = lat.determinant(sq)
        if det:
            break
    else:
        raise NonSimplicialCone(f"cone {rays} is not simplicial")
    adj = tuple(
        tuple(
            (-1) ** (i + j)
            * lat.determinant(
                [[sq[a][b] for b in range(k) if b != i] for a in range(k) if a != j]
            )
            for j in range(k)
        )
        for i in range(k)
    )
    columns = [[rays[c][j] for c in range(k)] for j in range(dim)]
    ann = tuple(lat.integer_vector(y) for y in lat.rational_kernel(columns))
    return rows, adj, det, ann


def _numerators(cone, x):
    rows, adj, det, ann = _frame(cone)
    if any(sum(a * b for a, b in zip(y, x)) for y in ann):
        return None, det
    xr = [x[r] for r in rows]
    return [sum(a * b for a, b in zip(row, xr)) for row in adj], det


def coefficients(cone, x):
    """Coordinates of ``x`` in the ray basis of ``cone`` (sorted rays), or None."""
    num, det = _numerators(cone, x)
    if num is None:
        return None
    return tuple(Fraction(n) / det for n in num)


def contains(cone, x):
    num, det = _numerators(cone, x)
    if num is None:
        return False
    return all(n * det >= 0 for n in num)


def carrier(cone, x):
    """Smallest face of ``cone`` containing ``x``, or None if ``x`` is outside."""
    num, det = _numerators(cone, x)
    if num is None or any(n * det < 0 for n in num):
        return None
    return frozenset(r for r, n in zip(sorted(cone), num) if n)


def in_support(fan, x):
    return any(contains(c, x) for c in fan.cones)


def _require_face(fan, sigma):
    sigma = frozenset(sigma)
    if not any(sigma <= c for c in fan.cones):
        raise NotAFace(f"{sorted(sigma)} is not a cone of the fan")
    return sigma


def open_star(fan, sigma):
    """All cones of the fan (faces included) containing ``sigma``."""
    sigma = _require_face(fan, sigma)
    return {c for c in fan.all_cones if sigma <= c}


def closed_star(fan, sigma):
    sigma = _require_face(fan, sigma)
    return with_cones(fan, [c for c in fan.cones if sigma <= c])


def subdivide_cone(cone, rho):
    """Maximal cones replacing ``cone`` after subdividing at ``rho``.

    Returns ``[cone]`` when ``rho`` is outside ``cone`` or already a ray.
    """
    if rho in cone:
        return [cone]
    support = carrier(cone, rho)
    if support is None:
        return [cone]
    return [(cone - {s}) | {rho} for s in sorted(support)]


def star_subdivide(fan, rho):
    rho = lat.primitive(rho)[0]
    if rho in fan.ray_set:
        return fan
    if fan.is_cobordism and not any(project(rho)):
        raise VerticalRay(f"ray {rho} is vertical")
    out = []
    hit = False
    for c in fan.cones:
        parts = subdivide_cone(c, rho)
        if parts[0] != c:
            hit = True
            for p in parts:
                _check_cone(p, fan.is_cobordism)
        out.extend(parts)
    if not hit:
        raise OutsideSupport(f"{rho} is not in the support of the fan")
    # pieces of distinct maximal cones stay maximal: each contains ρ plus a
    # facet of its own parent not shared with any other piece
    return _assemble(fan.ambient_rank, out, fan.is_cobordism)


def singular_faces(fan):
    return sorted((c for c in fan.all_cones if not is_smooth(c)), key=cone_key)


def smooth_resolve(fan):
    """Star-subdivide until every cone is smooth.

    Each step subdivides a minimal-dimensional singular face at the
    lexicographically smallest point of its open parallelepiped.
    """
    while True:
        sing = singular_faces(fan)
        if not sing:
            return fan
        tau = sing[0]
        p = lat.enumerate_parallelepiped(sorted(tau))[0]
        fan = star_subdivide(fan, p)


def refines(fine, coarse):
    """Every cone of ``fine`` lies inside some cone of ``coarse``."""
    return all(
        any(all(contains(d, r) for r in c) for d in coarse.cones) for c in fine.cones
    )
