"""Golden classification table: builder and comparison."""

import json
import math
import os

from phasecoex.classifier import PotentialSpec, ThetaExpansion, classify
from phasecoex.wick import ThetaSeries

PATH = os.path.join(os.path.dirname(__file__), "data", "golden_classification.json")


def load():
    with open(PATH) as f:
        return json.load(f)


def build(base, theta):
    slots = [ThetaSeries(0.0, 0.0, 0.0) for _ in range(base["m"] + 1)]
    for c in base["coeffs"]:
        slots[c["j"]] = ThetaSeries(c.get("a", 0.0), c.get("a1", 0.0), c.get("a2", 0.0))
    return PotentialSpec(base["regime"], slots), ThetaExpansion(tuple(tuple(t) for t in theta))


def same(want, got, path="", rel=1e-9):
    """List of mismatches between an expected fragment and the output."""
    if isinstance(want, dict):
        if not isinstance(got, dict):
            return ["%s: expected object, got %r" % (path, got)]
        out = []
        for k, v in want.items():
            if k not in got:
                out.append("%s.%s missing" % (path, k))
            else:
                out += same(v, got[k], "%s.%s" % (path, k), rel)
        return out
    if isinstance(want, list):
        if not isinstance(got, list) or len(got) != len(want):
            return ["%s: expected %d items, got %r" % (path, len(want), got)]
        return [m for i, (a, b) in enumerate(zip(want, got)) for m in same(a, b, "%s[%d]" % (path, i), rel)]
    if isinstance(want, (int, float)) and not isinstance(want, bool) and isinstance(got, (int, float)):
        if math.isclose(want, got, rel_tol=rel, abs_tol=1e-12):
            return []
        return ["%s: %r != %r" % (path, got, want)]
    return [] if want == got else ["%s: %r != %r" % (path, got, want)]


def run_case(table, case):
    base = table["bases"][case["base"]]
    p, theta = build(base, case["theta"])
    res = classify(p, theta, base["constants"]).to_dict()
    return same(case["expect"], res, case["name"]), res
