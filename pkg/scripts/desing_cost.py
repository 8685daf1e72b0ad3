"""Cost of π-desingularization on the random cobordism fans used by the tests.

Prints one CSV row per seed (rank of N, input maximal cones, largest input
π-multiplicity, seconds, outer iterations, output cones, status) and a
summary. A per-fan wall-clock cap stops runaway cases.

    python scripts/desing_cost.py --seeds 0 200 --cap 15
"""

import argparse
import csv
import random
import signal
import statistics
import sys
import time

from torfac import cobordism as cb
from torfac import desing as ds
from torfac import generators as gen


class Capped(BaseException):
    pass


def _raise(signum, frame):
    raise Capped()


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seeds", nargs=2, type=int, default=(0, 200), metavar=("FIRST", "STOP"))
    p.add_argument("--cap", type=float, default=15.0, help="seconds per fan")
    p.add_argument("--par-choice", choices=ds.PAR_CHOICES, default="balanced")
    args = p.parse_args()
    config = ds.DesingConfig(par_choice=args.par_choice)
    signal.signal(signal.SIGALRM, _raise)

    out = csv.writer(sys.stdout)
    out.writerow(["seed", "n_rank", "input_cones", "input_mult", "seconds", "iterations", "output_cones", "status"])
    rows = []
    for seed in range(*args.seeds):
        fan = gen.random_cobordism_fan(random.Random(seed))
        mult = cb.fan_profile(fan).g.mult
        t = time.perf_counter()
        signal.setitimer(signal.ITIMER_REAL, args.cap)
        try:
            res, trace = ds.pi_desingularize(fan, config)
            status, iters, size = "ok", len(trace.iteration_profiles), len(res)
        except Capped:
            status, iters, size = "capped", "", ""
        finally:
            signal.setitimer(signal.ITIMER_REAL, 0)
        secs = time.perf_counter() - t
        row = (seed, fan.ambient_rank - 1, len(fan), mult, f"{secs:.3f}", iters, size, status)
        out.writerow(row)
        sys.stdout.flush()
        rows.append(row)

    for rank in (2, 3):
        sel = [r for r in rows if r[1] == rank]
        ok = [r for r in sel if r[7] == "ok"]
        if not sel:
            continue
        print(
            f"# rank {rank}: {len(ok)}/{len(sel)} finished under {args.cap:g} s; "
            f"median seconds of finished {statistics.median(float(r[4]) for r in ok) if ok else 'n/a'}; "
            f"largest output {max((r[6] for r in ok), default='n/a')} cones",
            file=sys.stderr,
        )
        capped = [r for r in sel if r[7] == "capped"]
        if capped:
            print(
                f"# rank {rank}: input π-mult of capped fans: median "
                f"{statistics.median(r[3] for r in capped)}, of finished: median "
                f"{statistics.median(r[3] for r in ok) if ok else 'n/a'}",
                file=sys.stderr,
            )


if __name__ == "__main__":
    main()
