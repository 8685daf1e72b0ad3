"""Monomial ideals on smooth toric charts with a K*-action.

A chart is given by a smooth cone σ = ⟨v_1, ..., v_k⟩ in N = Z^n, completed to
a basis (v_1, ..., v_k, w_1, ..., w_{n-k}). Exponents are written in the dual
basis: the first k entries belong to polynomial variables, the rest to
invertible ones.
"""

from dataclasses import dataclass
from functools import reduce
from itertools import combinations, product
from math import gcd

from . import lattice as lat
from .errors import (
    AInsideCone,
    ChartMismatch,
    InternalInvariant,
    InvalidInput,
    ZeroIdeal,
)


@dataclass(frozen=True)
class MonomialIdeal:
    chart_rank: int
    poly_count: int
    generators: tuple
    chart: tuple = None

    def poly_part(self, m):
        return m[: self.poly_count]


@dataclass(frozen=True)
class NewtonCell:
    rays: tuple
    generator: tuple


@dataclass(frozen=True)
class NewtonSubdivision:
    base_cone: tuple
    cells: tuple
    exceptional_rays: tuple


@dataclass(frozen=True)
class ToroidalCheck:
    cone: tuple
    ray: tuple
    splits: bool
    a_in_complement: bool

    @property
    def passed(self):
        return self.splits and self.a_in_complement


def chart_basis(cone):
    """The rays of ``cone`` in the given order followed by a completion to a basis."""
    rays = [lat.vec(r) for r in cone]
    if not rays:
        raise InvalidInput("empty cone")
    if lat.lattice_index(rays) != 1:
        raise InvalidInput(f"cone {rays} is not smooth")
    return tuple(rays) + tuple(lat.complete_to_basis(rays))


def _coordinates(basis, x):
    """Coordinates of ``x`` in a lattice basis (exact integers)."""
    matrix = [[b[r] for b in basis] for r in range(len(basis))]
    inverse = lat.unimodular_inverse(matrix)
    return tuple(lat.dot(row, x) for row in inverse)


def _bezout(values):
    """Integers c with Σ c_i v_i = gcd(values), by iterated extended gcd."""
    coeffs = [0] * len(values)
    g = 0
    for i, v in enumerate(values):
        if v == 0:
            continue
        if g == 0:
            g, coeffs[i] = abs(v), (1 if v > 0 else -1)
            continue
        # solve s·g + t·v = gcd(g, v)
        old_r, r, old_s, s = g, v, 1, 0
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
        t = (old_r - old_s * g) // v
        if old_r < 0:
            old_r, old_s, t = -old_r, -old_s, -t
        coeffs = [c * old_s for c in coeffs]
        coeffs[i] = t
        g = old_r
    return g, coeffs


def minimalize(vectors):
    """Componentwise-minimal elements, sorted."""
    vs = sorted(set(vectors), key=lambda v: (sum(v), v))
    kept = []
    for v in vs:
        if not any(all(a <= b for a, b in zip(k, v)) for k in kept):
            kept.append(v)
    return sorted(kept)


def _solutions(coeffs, target):
    """All x ≥ 0 with Σ coeffs_i x_i = target, every coefficient positive."""
    if not coeffs:
        if target == 0:
            yield ()
        return
    head, tail = coeffs[0], coeffs[1:]
    for x in range(target // head + 1):
        for rest in _solutions(tail, target - head * x):
            yield (x,) + rest


def _minimal_exponents(weights, alpha, modulus):
    """Minimal m ≥ 0 with Σ w_i m_i = α, or ≡ α mod ``modulus`` when it is > 0."""
    k = len(weights)
    if modulus:
        box = product(range(modulus), repeat=k)
        return minimalize(
            m for m in box if (lat.dot(weights, m) - alpha) % modulus == 0
        )
    pos = [i for i, w in enumerate(weights) if w > 0]
    neg = [i for i, w in enumerate(weights) if w < 0]
    big_pos = max(weights[i] for i in pos)
    big_neg = max(-weights[i] for i in neg)
    # if m_i ≥ |w_j| and m_j ≥ w_i for some i ∈ pos, j ∈ neg, subtracting
    # |w_j| e_i + w_i e_j keeps the weight, so a minimal m has every positive
    # coordinate below big_neg or every negative one below big_pos
    found = []
    for small, other, bound in ((pos, neg, big_neg), (neg, pos, big_pos)):
        sign = 1 if other is neg else -1
        for part in product(range(bound), repeat=len(small)):
            partial = sum(weights[i] * x for i, x in zip(small, part))
            target = sign * (partial - alpha)
            if target < 0:
                continue
            for rest in _solutions([abs(weights[i]) for i in other], target):
                m = [0] * k
                for i, x in zip(small, part):
                    m[i] = x
                for i, x in zip(other, rest):
                    m[i] = x
                found.append(tuple(m))
    return minimalize(found)


def weight_ideal_generators(cone, a, alpha):
    """Minimal generators of the ideal spanned by z^m, m ∈ σ̌, ⟨m, a⟩ = α."""
    basis = chart_basis(cone)
    a = lat.vec(a)
    if len(a) != len(basis):
        raise InvalidInput("weight vector and cone live in different lattices")
    if not lat.is_primitive(a):
        raise InvalidInput(f"{a} is not primitive")
    k = len(cone)
    coords = _coordinates(basis, a)
    poly, torus = coords[:k], coords[k:]
    if not any(torus) and (all(x >= 0 for x in poly) or all(x <= 0 for x in poly)):
        raise AInsideCone(f"{a} lies in the cone or its opposite")
    g, bez = _bezout(torus)
    exps = _minimal_exponents(poly, alpha, g)
    if not exps:
        raise InternalInvariant(f"no monomial of weight {alpha}")
    gens = []
    for m in exps:
        rest = alpha - lat.dot(poly, m)
        tail = tuple(c * (rest // g) for c in bez) if g else (0,) * len(torus)
        gens.append(tuple(m) + tail)
    return MonomialIdeal(len(basis), k, tuple(sorted(gens)), basis)


def _minimal_by_poly(ideal_like, vectors):
    by_poly = {}
    for v in sorted(vectors):
        by_poly.setdefault(v[: ideal_like.poly_count], v)
    keep = set(minimalize(by_poly))
    return tuple(sorted(v for p, v in by_poly.items() if p in keep))


def product_ideal(ideals):
    ideals = list(ideals)
    if not ideals:
        raise InvalidInput("empty product")
    first = ideals[0]
    for other in ideals[1:]:
        if (other.chart_rank, other.poly_count) != (first.chart_rank, first.poly_count) or (
            first.chart is not None and other.chart is not None and other.chart != first.chart
        ):
            raise ChartMismatch("ideals live on different charts")
    current = [(0,) * first.chart_rank]
    for ideal in ideals:
        sums = {lat.add(u, v) for u in current for v in ideal.generators}
        current = _minimal_by_poly(first, sums)
    return MonomialIdeal(first.chart_rank, first.poly_count, tuple(current), first.chart)


def unit_ideal(chart_rank, poly_count, chart=None):
    return MonomialIdeal(chart_rank, poly_count, ((0,) * chart_rank,), chart)


def _cone_rays(inequalities, dim):
    """Extreme rays of the pointed cone {x : ⟨u, x⟩ ≥ 0 for u in inequalities}."""
    rays = set()
    for tight in combinations(inequalities, dim - 1):
        kernel = lat.rational_kernel([[u[j] for u in tight] for j in range(dim)])
        if len(kernel) != 1:
            continue
        x = lat.integer_vector(kernel[0])
        for cand in (x, tuple(-c for c in x)):
            if all(lat.dot(u, cand) >= 0 for u in inequalities):
                rays.add(lat.primitive(cand)[0])
    return sorted(rays)


def newton_subdivision(cone, ideal):
    """Domains of linearity of x ↦ min_m ⟨m, x⟩ over the generators, inside σ.

    Works in the chart coordinates λ (x = Σ λ_i v_i), where only the
    polynomial part of each generator matters.
    """
    if not ideal.generators:
        raise ZeroIdeal("the ideal has no generators")
    rays = [lat.vec(r) for r in cone]
    k = len(rays)
    if ideal.poly_count != k or (
        ideal.chart is not None and tuple(ideal.chart[:k]) != tuple(rays)
    ):
        raise ChartMismatch("the ideal is not defined on the chart of this cone")
    polys = sorted({ideal.poly_part(m) for m in ideal.generators})
    rep = {}
    for m in sorted(ideal.generators):
        rep.setdefault(ideal.poly_part(m), m)
    unit = [tuple(int(i == j) for j in range(k)) for i in range(k)]

    def to_n(lam):
        return lat.lincomb(lam, rays)

    cells = []
    exceptional = set()
    for p in polys:
        ineqs = unit + [lat.sub(q, p) for q in polys if q != p]
        lam_rays = _cone_rays(ineqs, k) if k > 1 else [(1,)]
        if len(lam_rays) < k or lat.rank(lam_rays) < k:
            continue
        for lam in lam_rays:
            if min(lat.dot(q, lam) for q in polys) > 0:
                exceptional.add(to_n(lam))
        cells.append(NewtonCell(tuple(sorted(to_n(lam) for lam in lam_rays)), rep[p]))
    cells.sort(key=lambda c: c.rays)
    return NewtonSubdivision(tuple(rays), tuple(cells), tuple(sorted(exceptional)))


def valuation(ideal, cone, x):
    """min over generators of ⟨m, λ⟩, where x = Σ λ_i v_i in the chart of ``cone``."""
    lam = _coordinates(chart_basis(cone), x)
    return min(lat.dot(m, lam) for m in ideal.generators)


def _facets(rays):
    dim = lat.rank(rays)
    ambient = len(rays[0])
    span_ann = [lat.integer_vector(y) for y in lat.rational_kernel(
        [[r[j] for r in rays] for j in range(ambient)]
    )]
    out = set()
    for sub in combinations(rays, dim - 1):
        if lat.rank(sub) < dim - 1:
            continue
        normals = lat.rational_kernel(
            [[v[j] for v in list(sub) + span_ann] for j in range(ambient)]
        )
        if len(normals) != 1:
            continue
        u = lat.integer_vector(normals[0])
        vals = [lat.dot(u, r) for r in rays]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            out.add(frozenset(r for r, v in zip(rays, vals) if v == 0))
    return out


def _pull(rays, order):
    """Pulling triangulation of a cone; compatible across cones for a global order."""
    rays = sorted(set(rays), key=order.__getitem__)
    if lat.rank(rays) == len(rays):
        return [frozenset(rays)]
    apex = rays[0]
    pieces = []
    for facet in _facets(rays):
        if apex in facet:
            continue
        for simplex in _pull(sorted(facet), order):
            pieces.append(simplex | {apex})
    return pieces


def simplicial_refinement(subdivision):
    """Simplicial cones refining the cells without new rays, as sorted ray tuples."""
    all_rays = sorted({r for c in subdivision.cells for r in c.rays})
    order = {r: i for i, r in enumerate(all_rays)}
    out = set()
    for cell in subdivision.cells:
        out.update(tuple(sorted(s)) for s in _pull(list(cell.rays), order))
    return sorted(out)


def _orthogonal_lattice(vectors, dim):
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    kernel = lat.rational_kernel([[v[j] for v in vectors] for j in range(dim)])
    return lat.saturation_basis([lat.integer_vector(y) for y in kernel])


def _splits_off(others, e, dim):
    basis = _orthogonal_lattice(others, dim)
    return reduce(gcd, (lat.dot(k, e) for k in basis), 0) == 1


def check_toroidal_action(cones, a, divisor_rays):
    """Per (cone, ray outside the divisor): does the ray split off compatibly with a?

    The ray e splits off with the action when some k ∈ M vanishes on the
    other rays and on a, with ⟨k, e⟩ = 1. ``cones`` is a fan or an iterable of
    ray lists.
    """
    cones = getattr(cones, "cones", cones)
    a = lat.vec(a)
    dim = len(a)
    divisor = {lat.vec(r) for r in divisor_rays}
    checks = []
    for cone in cones:
        rays = sorted(lat.vec(r) for r in cone)
        for e in rays:
            if e in divisor:
                continue
            others = [r for r in rays if r != e]
            checks.append(
                ToroidalCheck(
                    tuple(rays),
                    e,
                    _splits_off(others, e, dim),
                    _splits_off(others + [a], e, dim),
                )
            )
    return checks
