"""Random fans for property tests and experiments.

All generators take a ``random.Random`` instance so runs are reproducible.
"""

from fractions import Fraction

from . import cobordism as cb
from . import fan as fn
from . import lattice as lat


def random_vector(rng, dim, bound):
    while True:
        v = tuple(rng.randint(-bound, bound) for _ in range(dim))
        if any(v):
            return lat.primitive(v)[0]


def random_cone(rng, rank, bound, dim, cobordism):
    """Random simplicial cone, π-strictly convex when ``cobordism``."""
    for _ in range(1000):
        rays = [random_vector(rng, rank, bound) for _ in range(dim)]
        cone = frozenset(rays)
        if len(cone) != dim or lat.rank(rays) < dim:
            continue
        if cobordism:
            if any(not any(fn.project(r)) for r in rays):
                continue
            if not fn.is_pi_strictly_convex(cone):
                continue
        return cone
    return None


def random_fan(rng, rank, bound=4, max_cones=10, cobordism=True, attempts=60, min_dim=2):
    """Greedy random simplicial fan: add random cones that meet the others properly."""
    cones = []
    for _ in range(attempts):
        if len(cones) >= max_cones:
            break
        dim = rng.randint(min(min_dim, rank), rank)
        c = random_cone(rng, rank, bound, dim, cobordism)
        if c is None:
            continue
        if any(c <= d or d <= c for d in cones):
            continue
        if all(fn.cones_meet_properly(c, d) for d in cones):
            cones.append(c)
    if not cones:
        cones = [random_cone(rng, rank, bound, rank, cobordism)]
    return fn.fan_from_cones(rank, cones, cobordism)


def random_cobordism_fan(rng, n_rank=None, bound=4, max_cones=None):
    """Cobordism fan in N⁺ with rank(N) in {2, 3} and 1 to 10 maximal cones."""
    if n_rank is None:
        n_rank = rng.choice((2, 3))
    if max_cones is None:
        max_cones = rng.randint(1, 10)
    return random_fan(rng, n_rank + 1, bound, max_cones, cobordism=True)


def random_factorizable_fan(rng, n_rank=None, bound=4, max_cones=None):
    """Random cobordism fan whose lower and upper boundaries project to fans."""
    from .errors import ProjectionNotAFan
    from .factorization import boundary_fans

    while True:
        fan = random_cobordism_fan(rng, n_rank, bound, max_cones)
        try:
            boundary_fans(fan, "full")
        except ProjectionNotAFan:
            continue
        return fan


def random_pi_dependent_cone(rng, n_rank, bound=4, full=False):
    """π-dependent simplicial cone in N⁺ (rank of N = ``n_rank``)."""
    while True:
        dim = n_rank + 1 if full else rng.randint(2, n_rank + 1)
        c = random_cone(rng, n_rank + 1, bound, dim, cobordism=True)
        if c is not None and not cb.is_pi_independent(c):
            return c


def random_smooth_fan(rng, rank, steps=None):
    """Smooth complete-or-not fan: the orthant cones with random blowups."""
    basis = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
    signs = rng.sample(range(1 << rank), rng.randint(1, min(4, 1 << rank)))
    cones = []
    for s in signs:
        cones.append(
            frozenset(tuple(-x if (s >> i) & 1 else x for x in b) for i, b in enumerate(basis))
        )
    fan = fn.fan_from_cones(rank, cones)
    if steps is None:
        steps = rng.randint(0, 3)
    for _ in range(steps):
        face = rng.choice(sorted(fan.all_cones, key=fn.cone_key))
        if len(face) < 2:
            continue
        fan = fn.star_subdivide(fan, lat.lincomb([1] * len(face), sorted(face)))
    return fan


def random_point_in_cone(rng, cone, scale=20):
    rays = sorted(cone)
    coeffs = [Fraction(rng.randint(0, scale), rng.randint(1, scale)) for _ in rays]
    return tuple(sum(c * r[j] for c, r in zip(coeffs, rays)) for j in range(len(rays[0])))


def random_point_near_fan(rng, fan, scale=20):
    """Half the time a point of a random cone, otherwise a random vector."""
    if rng.random() < 0.5:
        return random_point_in_cone(rng, rng.choice(fan.cones), scale)
    return tuple(Fraction(rng.randint(-scale, scale), rng.randint(1, scale))
                 for _ in range(fan.ambient_rank))
