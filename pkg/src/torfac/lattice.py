"""Exact integer and rational linear algebra on lattices.

Vectors are tuples of Python ints (or Fractions where noted). Nothing here
touches floating point; the brute-force parallelepiped scan uses numpy int64
only as an independent oracle for tests.
"""

from fractions import Fraction
from functools import reduce
from itertools import product
from math import gcd

from .errors import CapExceeded, DependentInput, ZeroVector

DEFAULT_RANK_CAP = 8


def vec(v):
    return tuple(int(x) for x in v)


def primitive(v):
    """Return ``(p, g)`` with ``v == g * p``, ``g > 0`` and ``p`` primitive."""
    v = vec(v)
    g = reduce(gcd, v, 0)
    if g == 0:
        raise ZeroVector(f"zero vector {v}")
    return tuple(x // g for x in v), g


def is_primitive(v):
    return reduce(gcd, v, 0) == 1


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v):
    return tuple(c * a for a in v)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def lincomb(coeffs, vectors, dim=None):
    if dim is None:
        dim = len(vectors[0])
    out = [0] * dim
    for c, v in zip(coeffs, vectors):
        if c:
            for j, x in enumerate(v):
                out[j] += c * x
    return tuple(out)


def determinant(rows):
    """Bareiss fraction-free determinant of a square integer matrix."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _integer_rows(rows):
    out = []
    for r in rows:
        if all(isinstance(x, int) for x in r):
            out.append(list(r))
            continue
        r = [Fraction(x) for x in r]
        den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in r), 1)
        out.append([int(x * den) for x in r])
    return out


def rref(rows):
    """Reduced row echelon form over Q. Returns (matrix, pivot columns).

    Elimination is fraction-free on integer rows (each row rescaled to clear
    denominators and divided by its content); Fractions appear only when
    pivots are normalized at the end.
    """
    m = _integer_rows(rows)
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                row = [a * p[c] - f * b for a, b in zip(m[i], p)]
                g = reduce(gcd, row, 0)
                m[i] = [x // g for x in row] if g > 1 else row
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    out = []
    for i, row in enumerate(m):
        if i < len(pivots):
            d = row[pivots[i]]
            out.append([Fraction(x, d) for x in row])
        else:
            out.append([Fraction(x) for x in row])
    return out, pivots


def _echelon_rank(rows):
    m = _integer_rows(rows)
    if not m:
        return 0
    r = 0
    for c in range(len(m[0])):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r]
        for i in range(r + 1, len(m)):
            if m[i][c]:
                f = m[i][c]
                m[i] = [a * p[c] - f * b for a, b in zip(m[i], p)]
        r += 1
        if r == len(m):
            break
    return r


def rank(vectors):
    return _echelon_rank(list(vectors))


def rational_kernel(vectors):
    """Basis of ``{a : sum a_i v_i = 0}``, one vector per free index, in order."""
    vectors = list(vectors)
    k = len(vectors)
    if k == 0:
        return []
    dim = len(vectors[0])
    cols = [[vectors[i][j] for i in range(k)] for j in range(dim)]
    m, pivots = rref(cols)
    basis = []
    for f in range(k):
        if f in pivots:
            continue
        a = [Fraction(0)] * k
        a[f] = Fraction(1)
        for row, p in zip(m, pivots):
            a[p] = -row[f]
        basis.append(tuple(a))
    return basis


def integer_vector(q):
    """Clear denominators of a rational vector and make it primitive."""
    den = reduce(lambda a, b: a * b // gcd(a, b), (Fraction(x).denominator for x in q), 1)
    return primitive([Fraction(x) * den for x in q])[0]


def solve_in_span(vectors, x):
    """Coefficients ``a`` (Fractions) with ``sum a_i v_i = x``, or None.

    ``vectors`` must be linearly independent so the answer is unique.
    """
    vectors = list(vectors)
    k = len(vectors)
    if k == 0:
        return () if not any(x) else None
    dim = len(vectors[0])
    aug = [[vectors[i][j] for i in range(k)] + [x[j]] for j in range(dim)]
    m, pivots = rref(aug)
    if k in pivots:
        return None
    if len(pivots) < k:
        raise DependentInput("vectors are linearly dependent")
    a = [Fraction(0)] * k
    for row, p in zip(m, pivots):
        a[p] = row[k]
    return tuple(a)


def _maximal_minors(vectors):
    from itertools import combinations

    k = len(vectors)
    dim = len(vectors[0])
    for rows in combinations(range(dim), k):
        yield determinant([[v[r] for r in rows] for v in vectors])


def lattice_index(vectors):
    """Index of ``sum Z v_i`` in the saturated lattice ``N ∩ span(v_i)``."""
    vectors = [vec(v) for v in vectors]
    if not vectors:
        return 1
    g = 0
    for m in _maximal_minors(vectors):
        g = gcd(g, m)
    if g == 0:
        raise DependentInput("vectors are linearly dependent")
    return g


def smith_normal_form(matrix):
    """Smith form ``D = U A V`` with unimodular ``U``, ``V``.

    Returns ``(D, U, V)`` as lists of lists. Diagonal entries are nonnegative
    and each divides the next.
    """
    a = [list(map(int, r)) for r in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):
        for r in a:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                q = a[i][t] // a[t][t]
                if q:
                    add_row(i, t, -q)
                if a[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = a[t][j] // a[t][t]
                if q:
                    add_col(j, t, -q)
                if a[t][j]:
                    done = False
            if done:
                bad = next(
                    ((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                     if a[i][j] % a[t][t]),
                    None,
                )
                if bad is None:
                    break
                add_row(t, bad[0], 1)
                continue
            nz = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
            nz += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return a, u, v


def unimodular_inverse(u):
    """Inverse of a unimodular integer matrix, as integers."""
    n = len(u)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(u)]
    m, _ = rref(aug)
    out = []
    for r in m:
        row = r[n:]
        if any(x.denominator != 1 for x in row):
            raise DependentInput("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


def _check_independent(vectors, rank_cap):
    vectors = [vec(v) for v in vectors]
    if vectors and len(vectors[0]) > rank_cap:
        raise CapExceeded(f"ambient rank {len(vectors[0])} exceeds cap {rank_cap}")
    if rank(vectors) < len(vectors):
        raise DependentInput("vectors are linearly dependent")
    return vectors


def enumerate_parallelepiped(vectors, rank_cap=DEFAULT_RANK_CAP):
    """Lattice points ``sum a_i v_i`` with every ``0 < a_i < 1``, sorted.

    Uses the Smith form of the column matrix: the saturated lattice modulo
    ``sum Z v_i`` is ``prod Z/d_i``, and each coset has one representative
    in the half-open parallelepiped.
    """
    vectors = _check_independent(vectors, rank_cap)
    if not vectors:
        return []
    k = len(vectors)
    dim = len(vectors[0])
    cols = [[vectors[i][j] for i in range(k)] for j in range(dim)]
    d, _, v = smith_normal_form(cols)
    diag = [d[i][i] for i in range(k)]
    points = []
    for c in product(*(range(x) for x in diag)):
        coeffs = [
            sum(Fraction(v[i][j] * c[j], diag[j]) for j in range(k)) for i in range(k)
        ]
        frac = [x - (x.numerator // x.denominator) for x in coeffs]
        if all(x > 0 for x in frac):
            p = tuple(
                sum(frac[i] * vectors[i][j] for i in range(k)) for j in range(dim)
            )
            points.append(tuple(int(x) for x in p))
    return sorted(points)


def enumerate_parallelepiped_bruteforce(vectors, rank_cap=DEFAULT_RANK_CAP):
    """Box scan oracle for :func:`enumerate_parallelepiped`.

    Scans all integer points of the bounding box and solves for coefficients
    with an adjugate on a nonsingular row subset.
    """
    import numpy as np
    from itertools import combinations

    vectors = _check_independent(vectors, rank_cap)
    if not vectors:
        return []
    k = len(vectors)
    dim = len(vectors[0])
    lo = [sum(min(0, v[j]) for v in vectors) for j in range(dim)]
    hi = [sum(max(0, v[j]) for v in vectors) for j in range(dim)]
    rows = next(
        r for r in combinations(range(dim), k)
        if determinant([[v[i] for i in r] for v in vectors])
    )
    sq = [[vectors[c][r] for c in range(k)] for r in rows]
    det = determinant(sq)
    adj = [
        [
            (-1) ** (i + j)
            * determinant([[sq[a][b] for b in range(k) if b != i] for a in range(k) if a != j])
            for j in range(k)
        ]
        for i in range(k)
    ]
    grids = np.meshgrid(*[np.arange(lo[j], hi[j] + 1, dtype=np.int64) for j in range(dim)],
                        indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    num = pts[:, list(rows)] @ np.array(adj, dtype=np.int64).T
    if det < 0:
        num, det = -num, -det
    inside = np.all((num > 0) & (num < det), axis=1)
    mat = np.array(vectors, dtype=np.int64)
    # x must equal M a exactly: det * x == num @ M
    recon = num @ mat
    inside &= np.all(recon == det * pts, axis=1)
    return sorted(tuple(int(x) for x in p) for p in pts[inside])


def complete_to_basis(vectors):
    """Extend a saturated independent family to a basis of Z^n.

    Returns the completing vectors. Raises DependentInput if the family is
    not part of a basis (index > 1).
    """
    vectors = [vec(v) for v in vectors]
    dim = len(vectors[0])
    if lattice_index(vectors) != 1:
        raise DependentInput("family does not extend to a basis")
    k = len(vectors)
    # rows of U^{-1} beyond k give a completion: A = U^{-1} D V^{-1} with D = [I;0]
    cols = [[vectors[i][j] for i in range(k)] for j in range(dim)]
    _, u, _ = smith_normal_form(cols)
    uinv = unimodular_inverse(u)
    return [tuple(uinv[r][c] for r in range(dim)) for c in range(k, dim)]


def saturation_basis(vectors):
    """A Z-basis of ``Z^n ∩ span(vectors)`` (vectors may be dependent)."""
    vectors = [vec(v) for v in vectors if any(v)]
    if not vectors:
        return []
    dim = len(vectors[0])
    cols = [[v[j] for v in vectors] for j in range(dim)]
    d, u, _ = smith_normal_form(cols)
    r = sum(1 for i in range(min(len(d), len(vectors))) if d[i][i])
    uinv = unimodular_inverse(u)
    return [tuple(uinv[row][c] for row in range(dim)) for c in range(r)]


def exact_feasible(a_eq, b_eq):
    """Phase-I simplex with Bland's rule: find ``x >= 0`` with ``A x = b``.

    Returns a tuple of Fractions, or None if infeasible.
    """
    m = len(a_eq)
    if m == 0:
        return ()
    n = len(a_eq[0])
    rows = []
    for r, b in zip(a_eq, b_eq):
        r = [Fraction(x) for x in r]
        b = Fraction(b)
        if b < 0:
            r, b = [-x for x in r], -b
        rows.append(r + [Fraction(int(i == len(rows))) for i in range(m)] + [b])
    basis = [n + i for i in range(m)]
    total = n + m
    # objective: minimize sum of artificials; reduced cost row
    cost = [Fraction(0)] * (total + 1)
    for r in rows:
        for j in range(total + 1):
            cost[j] -= r[j]
    for i in range(m):
        cost[n + i] += 1
    while True:
        enter = next((j for j in range(total) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i, r in enumerate(rows):
            if r[enter] > 0:
                ratio = r[-1] / r[enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            break  # unbounded is impossible in phase I
        i = best[1]
        piv = rows[i][enter]
        rows[i] = [x / piv for x in rows[i]]
        for k in range(m):
            if k != i and rows[k][enter] != 0:
                f = rows[k][enter]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[i])]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, rows[i])]
        basis[i] = enter
    if cost[-1] != 0:
        return None
    x = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] = rows[i][-1]
    return tuple(x)
