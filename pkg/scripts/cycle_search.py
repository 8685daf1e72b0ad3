"""Search random cobordism fans for circuits that cannot be ordered.

Circuits are ordered by the precedence relation of the factorization; a
cycle would make ``circuit_order`` raise ``NotFiltrable``. Both unrestricted
random fans and fans whose quotients exist are tried.

    python scripts/cycle_search.py --count 200
"""

import argparse
import random
import time

from torfac import factorization as fz
from torfac import generators as gen
from torfac.errors import NotFiltrable


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    for label, make in [
        ("plane quotients, any fan", lambda r: gen.random_cobordism_fan(r, n_rank=2)),
        ("space quotients, any fan", lambda r: gen.random_fan(r, 4, 3, 40, cobordism=True)),
        ("plane quotients, quotients exist", lambda r: gen.random_factorizable_fan(r, n_rank=2)),
        ("space quotients, quotients exist", lambda r: gen.random_factorizable_fan(r, n_rank=3, bound=3)),
    ]:
        t = time.perf_counter()
        cycles, circuits = [], 0
        for i in range(args.count):
            seed = args.seed + i
            fan = make(random.Random(seed))
            circuits += len(fz.circuits(fan))
            try:
                fz.circuit_order(fan)
            except NotFiltrable as exc:
                cycles.append((seed, len(exc.cycle) - 1))
        print(
            f"{label}: {args.count} fans, {circuits} circuits, {len(cycles)} cycles "
            f"{cycles[:5] if cycles else ''} ({time.perf_counter() - t:.1f} s)"
        )


if __name__ == "__main__":
    main()
