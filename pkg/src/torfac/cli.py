"""Command-line front end: ``torfac <command> ...``.

Exit codes: 0 success, 2 invalid input, 3 circuits cannot be ordered,
4 internal invariant violated.
"""

import argparse
import os
import random
import sys
from fractions import Fraction

from . import cobordism as cb
from . import desing as ds
from . import factorization as fz
from . import fan as fn
from . import ideals as idl
from . import lattice as lat
from . import serialize as io
from .errors import InternalInvariant, InvalidInput, NotFiltrable, TorfacError

EXIT_OK, EXIT_INPUT, EXIT_FILTRABLE, EXIT_INTERNAL = 0, 2, 3, 4

# options whose values may start with a minus sign
_VALUE_OPTIONS = ("--weights", "--alphas", "--alpha", "--cone")


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text}") from exc


def _load_fan(path, level):
    return io.fan_from_json(io.read_json(path), level)


def _emit(args, doc):
    io.write_text(getattr(args, "output", "-") or "-", io.dumps(doc) + "\n")


def _config(args):
    return ds.DesingConfig(max_iterations=args.max_iterations)


def cmd_validate(args):
    fan = _load_fan(args.input, args.validate_level)
    doc = {
        "format": io.FORMAT,
        "valid": True,
        "ambient_rank": fan.ambient_rank,
        "cobordism": fan.is_cobordism,
        "maximal_cones": len(fan),
    }
    if fan.is_cobordism:
        doc["pi_nonsingular"] = cb.is_pi_nonsingular(fan)
    _emit(args, doc)


def cmd_pidesing(args):
    fan = _load_fan(args.input, args.validate_level)
    if not fan.is_cobordism:
        raise InvalidInput("pidesing needs a cobordism fan")
    if cb.is_pi_nonsingular(fan):
        out, trace = fan, ds.DesingTrace()
    else:
        out, trace = ds.pi_desingularize(fan, _config(args))
    if args.check:
        if not cb.is_pi_nonsingular(out):
            raise InternalInvariant("output is not π-nonsingular")
        if not ds.check_trace(trace):
            raise InternalInvariant("fan profiles do not decrease strictly")
        if not fn.refines(out, fan):
            raise InternalInvariant("output does not refine the input")
    if args.trace:
        lines = io.trace_lines(trace)
        io.write_text(args.trace, "".join(line + "\n" for line in lines))
    _emit(args, io.fan_to_json(out))


def cmd_boundaries(args):
    fan = _load_fan(args.input, args.validate_level)
    if not fan.is_cobordism:
        raise InvalidInput("boundaries needs a cobordism fan")
    lower, upper = fz.boundary_fans(fan, args.validate_level)
    _emit(args, {"format": io.FORMAT, "lower": io.fan_to_json(lower), "upper": io.fan_to_json(upper)})


def _read_certificate(path):
    doc = io.read_json(path)
    try:
        entries = doc["weights"]
        return {
            frozenset(lat.vec(r) for r in e["circuit"]): Fraction(str(e["weight"]))
            for e in entries
        }
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"malformed order certificate: {exc}") from exc


def cmd_factor(args):
    fan = _load_fan(args.input, args.validate_level)
    if not fan.is_cobordism:
        raise InvalidInput("factor needs a cobordism fan")
    cert = _read_certificate(args.order_certificate) if args.order_certificate else None
    steps, report = fz.factorize(fan, cert, _config(args), args.validate_level)
    if args.verify:
        for i, s in enumerate(steps, 1):
            problems = fz.verify_step(s)
            if problems:
                raise InternalInvariant(f"step {i}: " + "; ".join(problems))
        if not report.chain_consistent:
            raise InternalInvariant("consecutive steps do not share their quotient fans")
    summary = fz.summary_lines(steps)
    for line in summary:
        print(line, file=sys.stderr)
    _emit(args, io.factorization_to_json(steps, report, summary))


def cmd_cobordism_blowup(args):
    doc = io.read_json(args.input)
    fan = io.fan_from_json(doc, args.validate_level)
    try:
        center = [lat.vec(doc["rays"][i]) for i in args.cone]
    except (IndexError, TypeError) as exc:
        raise InvalidInput(f"bad ray index in --cone: {exc}") from exc
    _emit(args, io.fan_to_json(fz.cobordism_of_blowup(fan, center)))


def cmd_cobordism_weights(args):
    rep = fz.from_weights(args.weights)
    _emit(args, {
        "format": io.FORMAT,
        "weights": list(rep.weights),
        "alpha_split": rep.alpha_split,
        "cobordism": io.fan_to_json(rep.cobordism),
        "lower_quotient_fan": io.fan_to_json(rep.lower_quotient_fan),
        "upper_quotient_fan": io.fan_to_json(rep.upper_quotient_fan),
        "fiber_weights_minus": list(rep.fiber_weights_minus) if rep.fiber_weights_minus else None,
        "fiber_weights_plus": list(rep.fiber_weights_plus) if rep.fiber_weights_plus else None,
    })


def _orthant(n):
    return [tuple(int(i == j) for j in range(n)) for i in range(n)]


def cmd_ideal_weight(args):
    a = args.weights
    ideal = idl.weight_ideal_generators(_orthant(len(a)), a, args.alpha)
    _emit(args, io.ideal_to_json(ideal))


def cmd_ideal_subdivide(args):
    a = args.weights
    cone = _orthant(len(a))
    ideal = idl.product_ideal(idl.weight_ideal_generators(cone, a, x) for x in args.alphas)
    sub = idl.newton_subdivision(cone, ideal)
    doc = io.subdivision_to_json(sub)
    doc["ideal"] = io.ideal_to_json(ideal)
    _emit(args, doc)


def cmd_selftest(args):
    """Randomized smoke test; only this command reads TORFAC_SEED."""
    seed = int(os.environ.get("TORFAC_SEED", "0"))
    rng = random.Random(seed)
    from .generators import random_pi_dependent_cone

    checked = 0
    for _ in range(args.count):
        cone = random_pi_dependent_cone(rng, rng.choice((2, 3)), full=True)
        fan = fn.fan_from_cones(len(next(iter(cone))), [cone], True)
        if cb.pi_multiplicity(cone) > 8:
            continue
        out, trace = ds.pi_desingularize(fan, _config(args))
        if not (ds.check_trace(trace) and cb.is_pi_nonsingular(out) and fn.refines(out, fan)):
            raise InternalInvariant("self-test failed")
        checked += 1
    _emit(args, {"format": io.FORMAT, "seed": seed, "checked": checked, "ok": True})


def build_parser():
    p = argparse.ArgumentParser(prog="torfac", description="Toric cobordisms and factorization.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", default="-", help="output file, '-' for stdout")
    common.add_argument("--validate-level", choices=fn.VALIDATE_LEVELS, default="light")
    common.add_argument("--max-iterations", type=int, default=ds.DesingConfig().max_iterations)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check a fan file")
    s.add_argument("input")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("pidesing", parents=[common], help="π-desingularize a cobordism fan")
    s.add_argument("input")
    s.add_argument("--trace", help="write the subdivision trace as JSON lines")
    s.add_argument("--check", action="store_true", help="re-verify the result")
    s.set_defaults(func=cmd_pidesing)

    s = sub.add_parser("boundaries", parents=[common], help="quotient fans of a cobordism")
    s.add_argument("input")
    s.set_defaults(func=cmd_boundaries)

    s = sub.add_parser("factor", parents=[common], help="factor into elementary steps")
    s.add_argument("input")
    s.add_argument("--verify", action="store_true")
    s.add_argument("--order-certificate", help="JSON weights ordering the circuits")
    s.set_defaults(func=cmd_factor)

    s = sub.add_parser("cobordism", help="build standard cobordisms")
    cs = s.add_subparsers(dest="kind", required=True)
    b = cs.add_parser("blowup", parents=[common], help="cobordism of a blowup along a cone")
    b.add_argument("input")
    b.add_argument("--cone", type=_int_list, required=True, help="ray indices of the center")
    b.set_defaults(func=cmd_cobordism_blowup)
    w = cs.add_parser("weights", parents=[common], help="cobordism of a weighted K*-action")
    w.add_argument("--weights", type=_int_list, required=True)
    w.set_defaults(func=cmd_cobordism_weights)

    s = sub.add_parser("ideal", help="monomial ideals on the orthant chart")
    isub = s.add_subparsers(dest="kind", required=True)
    w = isub.add_parser("weight", parents=[common], help="generators of a weight ideal")
    w.add_argument("--weights", type=_int_list, required=True)
    w.add_argument("--alpha", type=int, required=True)
    w.set_defaults(func=cmd_ideal_weight)
    d = isub.add_parser("subdivide", parents=[common], help="subdivision of a product of weight ideals")
    d.add_argument("--weights", type=_int_list, required=True)
    d.add_argument("--alphas", type=_int_list, required=True)
    d.set_defaults(func=cmd_ideal_subdivide)

    s = sub.add_parser("selftest", parents=[common], help="randomized smoke test (TORFAC_SEED)")
    s.add_argument("--count", type=int, default=20)
    s.set_defaults(func=cmd_selftest)
    return p


def _join_values(argv):
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_OPTIONS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_values(argv))
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        args.func(args)
    except NotFiltrable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FILTRABLE
    except InternalInvariant as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except InvalidInput as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TorfacError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
