"""Walk through the worked examples: weight ideals of the action with weights
(2, 1, -1), the subdivision of their product, and the factorization of a
blowup cobordism and of the flop cobordism.

    python scripts/golden_demo.py
"""

from torfac import factorization as fz
from torfac import fan as fn
from torfac import ideals as idl

ORTHANT = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
A = (2, 1, -1)


def show_ideals():
    print(f"weight ideals for a = {A} on the orthant chart")
    factors = []
    for alpha in (-1, 1, 2):
        ideal = idl.weight_ideal_generators(ORTHANT, A, alpha)
        factors.append(ideal)
        print(f"  I_{alpha}: {list(ideal.generators)}")
    prod = idl.product_ideal(factors)
    print(f"  product: {list(prod.generators)}")
    sub = idl.newton_subdivision(ORTHANT, prod)
    for cell in sub.cells:
        print(f"  cell {list(cell.rays)} active monomial {cell.generator}")
    print(f"  exceptional rays: {list(sub.exceptional_rays)}")
    checks = idl.check_toroidal_action(
        [c.rays for c in sub.cells if len(c.rays) == 3], A, sub.exceptional_rays
    )
    for c in checks:
        print(f"  ray {c.ray} of {list(c.cone)} splits off with the action: {c.passed}")


def show_factorizations():
    plane = fn.fan_from_cones(2, [[(1, 0), (0, 1)], [(0, 1), (-1, 0)]])
    cob = fz.cobordism_of_blowup(plane, [(1, 0), (0, 1)])
    steps, _ = fz.factorize(cob)
    print("blowup of the plane fan at a smooth two-dimensional cone")
    for line in fz.summary_lines(steps):
        print("  " + line)
    rep = fz.from_weights([-1, -1, 1, 1])
    steps, _ = fz.factorize(rep.cobordism)
    print(f"weights (-1, -1, 1, 1): fibers {rep.fiber_weights_minus} and {rep.fiber_weights_plus}")
    for line in fz.summary_lines(steps):
        print("  " + line)


if __name__ == "__main__":
    show_ideals()
    print()
    show_factorizations()
