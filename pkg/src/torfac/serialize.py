"""JSON documents for fans, traces, factorizations and ideals.

Output is canonical (sorted keys, fixed separators) so equal objects give
byte-identical text. Files are written through a temporary file and renamed.
"""

import json
import os
import sys
import tempfile

from . import fan as fn
from .errors import InvalidInput

FORMAT = 1


def _int(x):
    if isinstance(x, bool):
        raise InvalidInput(f"expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x.strip())
        except ValueError:
            pass
    raise InvalidInput(f"expected an integer, got {x!r}")


def fan_to_json(fan):
    return {
        "format": FORMAT,
        "ambient_rank": fan.ambient_rank,
        "cobordism": fan.is_cobordism,
        "rays": [list(r) for r in fan.rays],
        "maximal_cones": [list(c) for c in fan.maximal_cones],
    }


def fan_from_json(doc, validate_level="light"):
    if not isinstance(doc, dict):
        raise InvalidInput("a fan document must be a JSON object")
    fmt = doc.get("format", FORMAT)
    if fmt != FORMAT:
        raise InvalidInput(f"unsupported format {fmt!r}")
    try:
        rank = _int(doc["ambient_rank"])
        rays = [[_int(x) for x in r] for r in doc["rays"]]
        cones = [[_int(i) for i in c] for c in doc["maximal_cones"]]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed fan document: {exc}") from exc
    cobordism = doc.get("cobordism", False)
    if not isinstance(cobordism, bool):
        raise InvalidInput("'cobordism' must be a boolean")
    if rank < 1:
        raise InvalidInput("ambient_rank must be positive")
    return fn.make_fan(rank, rays, cones, cobordism, validate_level)


def trace_lines(trace):
    return [dumps(e.to_json()) for e in trace.entries]


def step_to_json(step):
    return {
        "circuit": sorted(list(r) for r in step.circuit),
        "v": list(step.v),
        "lower_fan": fan_to_json(step.lower_fan),
        "upper_fan": fan_to_json(step.upper_fan),
        "middle_fan": fan_to_json(step.middle_fan),
        "lower_center": sorted(list(r) for r in step.lower_center),
        "upper_center": sorted(list(r) for r in step.upper_center),
        "lower_degenerate": step.lower_degenerate,
        "upper_degenerate": step.upper_degenerate,
    }


def factorization_to_json(steps, report, summary):
    return {
        "format": FORMAT,
        "desingularized": report.desingularized,
        "initial_lower": fan_to_json(report.initial_lower),
        "final_upper": fan_to_json(report.final_upper),
        "chain_consistent": report.chain_consistent,
        "steps": [step_to_json(s) for s in steps],
        "summary": summary,
    }


def ideal_to_json(ideal):
    return {
        "format": FORMAT,
        "poly_count": ideal.poly_count,
        "generators": [list(m) for m in ideal.generators],
    }


def subdivision_to_json(sub):
    return {
        "format": FORMAT,
        "base_cone": [list(r) for r in sub.base_cone],
        "cells": [
            {"rays": [list(r) for r in c.rays], "generator": list(c.generator)}
            for c in sub.cells
        ],
        "exceptional_rays": [list(r) for r in sub.exceptional_rays],
    }


def dumps(doc):
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def read_text(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc


def read_json(path):
    try:
        return json.loads(read_text(path))
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: invalid JSON: {exc}") from exc


def write_text(path, text):
    """Write ``text`` to ``path`` atomically; ``-`` writes to stdout."""
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
