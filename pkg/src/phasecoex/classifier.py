"""Bifurcation detection and classification of the large-scale limit.

Drifts and couplings are reported as c in

    d_t u = Lap u - c u + xi            (OU)
    d_t u = Lap u - c :u^2: + xi        (Phi3)
    d_t u = Lap u - c :u^3: + ... + xi  (Phi4)

so a stable OU has c > 0.  theta is a finite expansion sum rho_i eps^beta_i
|log eps|^p_i.  The decision charts are data tables walked by ``_walk``.
"""

from dataclasses import asdict, dataclass, field
from fractions import Fraction
import json
import math

import numpy as np

from .constants import compute_A, compute_B

__all__ = [
    "PotentialSpec", "ThetaExpansion", "Branch", "Classification", "BifurcationKind",
    "detect_bifurcation", "cubic_roots", "rho_star", "rho_stars", "theta_star_weak_noise",
    "classify", "classify_weakly_nonlinear", "classify_weak_noise", "phi3_coupling",
    "WN_CHART", "NOISE_CHART", "UNSPEC",
]

UNSPEC = "unspecified"
F = Fraction


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x).limit_denominator(10 ** 6)


def _num(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    return x


@dataclass
class PotentialSpec:
    regime: str
    coefficients: list           # ThetaSeries per Taylor slot j = 0..m

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def __post_init__(self):
        if self.regime not in ("weakly_nonlinear", "weak_noise"):
            raise ValueError("unknown regime %r" % self.regime)
        if self.regime == "weak_noise" and self.degree < 6:
            raise ValueError("weak-noise data must run through degree 6")

    def value(self, j):
        return float(self.coefficients[j].value) if j <= self.degree else 0.0

    def d1(self, j):
        return float(self.coefficients[j].d1) if j <= self.degree else 0.0

    def d2(self, j):
        return float(self.coefficients[j].d2) if j <= self.degree else 0.0


@dataclass(frozen=True)
class ThetaExpansion:
    terms: tuple = ()            # (rho, beta, log_power)

    def __post_init__(self):
        ts = tuple((float(r), _frac(b), int(p)) for r, b, p in
                   (t if len(t) == 3 else (t[0], t[1], 0) for t in self.terms))
        object.__setattr__(self, "terms", ts)
        if len(ts) > 4:
            raise ValueError("at most four terms")
        keys = [(b, -p) for _, b, p in ts]
        if any(k1 >= k2 for k1, k2 in zip(keys, keys[1:])):
            raise ValueError("terms must be strictly ordered by size")
        if any(b <= 0 for _, b, _ in ts):
            raise ValueError("exponents must be positive")

    @classmethod
    def of(cls, *terms):
        return cls(tuple(terms))

    def __len__(self):
        return len(self.terms)


@dataclass
class Branch:
    family: str
    alpha: Fraction
    coefficient: object
    stability: str
    h: object = None             # (coef, power) or None
    parameter: object = None
    derived: object = None
    note: str = ""

    def to_dict(self):
        d = {"family": self.family, "alpha": _num(self.alpha), "coefficient": _num(self.coefficient),
             "stability": self.stability, "parameter": self.parameter}
        d["h"] = None if self.h is None else {"coef": _num(self.h[0]), "power": _num(self.h[1])}
        if self.derived is not None:
            d["derived"] = _num(self.derived)
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class BifurcationKind:
    kind: str
    witness: dict
    ambiguous: list = field(default_factory=list)


@dataclass
class Classification:
    regime: str
    bifurcation: str
    status: str = "charted"
    invariant: dict = field(default_factory=dict)
    critical: dict = field(default_factory=dict)
    branches: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def to_dict(self):
        return {"regime": self.regime, "bifurcation": self.bifurcation, "status": self.status,
                **{k: _num(v) for k, v in self.invariant.items()},
                **{k: (_num(v) if not isinstance(v, (list, tuple)) else [_num(x) for x in v])
                   for k, v in self.critical.items()},
                "branches": [b.to_dict() for b in self.branches], "warnings": self.warnings}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


# ---------------------------------------------------------------- zero tests

class _Zero:
    """|x| < tol is zero, tol <= |x| < band*tol is flagged."""

    def __init__(self, tol, band=1e3):
        self.tol = tol
        self.band = band
        self.flags = []

    def __call__(self, name, x):
        ax = abs(x)
        if self.tol <= ax < self.band * self.tol:
            self.flags.append(name)
        return ax < self.tol

    def cmp(self, name, x, y):
        """Sign of x - y with relative tolerance."""
        scale = max(1.0, abs(x), abs(y))
        if self(name, (x - y) / scale):
            return 0
        return 1 if x > y else -1


def detect_bifurcation(p, tol=1e-12):
    z = _Zero(tol)
    v, d1 = p.value, p.d1
    w = {"a0": v(0), "a1": v(1), "a2": v(2), "a3": v(3), "a0'": d1(0), "a1'": d1(1)}
    if p.regime == "weak_noise":
        pitch = z("a0", v(0)) and z("a0'", d1(0)) and z("a1", v(1)) and z("a2", v(2)) \
            and d1(1) < 0 and v(3) > 0 and not z("a1'", d1(1)) and not z("a3", v(3))
    else:
        pitch = z("a0", v(0)) and z("a1", v(1)) and z("a0'", d1(0)) and d1(1) < 0 \
            and z("a2", v(2)) and v(3) > 0 and not z("a1'", d1(1)) and not z("a3", v(3))
    if pitch:
        kind = "pitchfork"
    elif z("a0", v(0)) and z("a1", v(1)) and not z("a0'", d1(0)) and not z("a2", v(2)):
        kind = "saddle_node"
    elif z("a0", v(0)) and not z("a1", v(1)):
        kind = "stable_point"
    else:
        kind = "other"
    return BifurcationKind(kind, w, sorted(set(z.flags)))


# ---------------------------------------------------------------- the cubic

def cubic_roots(rho, a3, a1p, A, tol=1e-12):
    """Real roots of f(r) = a3 r^3 + rho a1p r - A.

    Returns [(root, multiplicity, stability, f'(root))] sorted by root;
    stability is 'stable' if f' > 0, 'unstable' if f' < 0, 'critical' at a
    double root.
    """
    p, q = rho * a1p / a3, -A / a3
    disc = -4 * p ** 3 - 27 * q ** 2
    scale = max(abs(p), abs(q) ** (2 / 3), 1e-300)
    fp = lambda r: 3 * a3 * r * r + rho * a1p
    if abs(disc) < tol * scale ** 3:
        if abs(p) < tol * scale:
            out = [(0.0, 3)]
        else:
            out = sorted([(-3 * q / (2 * p), 2), (3 * q / p, 1)])
    elif disc > 0:
        m = 2 * math.sqrt(-p / 3)
        phi = math.acos(max(-1.0, min(1.0, 3 * q / (p * m))))
        out = sorted((m * math.cos((phi - 2 * math.pi * k) / 3), 1) for k in range(3))
    else:
        s = math.sqrt(q * q / 4 + p ** 3 / 27)
        r = np.cbrt(-q / 2 + s) + np.cbrt(-q / 2 - s)
        # one Newton step cleans the cancellation
        r = float(r - (r ** 3 + p * r + q) / (3 * r * r + p)) if 3 * r * r + p != 0 else float(r)
        out = [(r, 1)]
    res = []
    for r, mult in out:
        d = fp(r)
        stab = "critical" if mult > 1 else ("stable" if d > 0 else "unstable")
        res.append((r, mult, stab, 0.0 if mult > 1 else d))
    return res


def rho_star(a3, a1p, A):
    return 3 / abs(a1p) * (a3 * A * A / 4) ** (1 / 3)


def phi3_coupling(a3, A):
    """c at the double root r1 = -(A / 2 a3)^(1/3), i.e. 3 a3 r1."""
    return -3 * np.cbrt(a3 * a3 * A / 2)


def rho_stars(a3, a1p, C0, B):
    if B == 0:
        raise ValueError("B = 0: use the symmetric classification")
    r1 = 3 * a3 * C0 / abs(a1p)
    r2 = 9 / 12 ** (1 / 3) / abs(a1p) * np.cbrt(a3 * B * B * C0 ** 4)
    r3 = 2 * B * C0 * math.sqrt(3 * r2 / (abs(a1p) * a3))
    return r1, float(r2), r3


def _B_of(p):
    return compute_B(p.value(4), p.value(3), p.d1(1), p.d2(0), p.d1(2))


def theta_star_weak_noise(p, C0):
    return rho_stars(p.value(3), p.d1(1), C0, _B_of(p))


# ---------------------------------------------------------------- charts
#
# node: (label, term index, 'beta' | 'rho', threshold key, {'lt','eq','gt': child})
# leaf: list of (family, stability, alpha, coefficient key, h key)
# alpha is (const, coef, term index) meaning const + coef * beta_index.

def _a(c, k=0, i=None):
    return (F(c), F(k), i)


WN_CHART = {
    "b1": ("beta_1 vs 2/3", 0, "beta", F(2, 3), {"lt": "L_b1", "eq": "r1", "gt": "L_unique"}),
    "r1": ("rho_1 vs rho*", 0, "rho", "rho_star", {"lt": "L_roots", "eq": "b2", "gt": "L_roots"}),
    "b2": ("beta_2 vs 8/9", 1, "beta", F(8, 9), {"lt": "L_split", "eq": "L_family", "gt": "L_phi3"}),
    "L_b1": [("OU", "stable", _a(F(1, 2), F(1, 2), 0), "outer", "outer-"),
             ("OU", "unstable", _a(F(1, 2), F(1, 2), 0), "middle", "middle"),
             ("OU", "stable", _a(F(1, 2), F(1, 2), 0), "outer", "outer+")],
    "L_unique": [("OU", "stable", _a(F(5, 6)), "unique", "unique")],
    "L_roots": [("OU", None, _a(F(5, 6)), "fprime", "root")],
    "L_split": [("OU", "stable", _a(F(2, 3), F(1, 4), 1), UNSPEC, "r1"),
                ("OU", "unstable", _a(F(2, 3), F(1, 4), 1), UNSPEC, "r1"),
                ("OU", "stable", _a(F(5, 6)), UNSPEC, "r2")],
    "L_family": [("Phi3", "critical", _a(F(8, 9)), "phi3", "r1"),
                 ("OU", "stable", _a(F(5, 6)), UNSPEC, "r2")],
    "L_phi3": [("Phi3", "critical", _a(F(8, 9)), "phi3", "r1"),
               ("OU", "stable", _a(F(5, 6)), "fprime_r2", "r2")],
}

NOISE_CHART = {
    "b1": ("beta_1 vs 1", 0, "beta", F(1), {"lt": "L_b1", "eq": "r1", "gt": "L_half"}),
    "r1": ("rho_1 vs rho_1*", 0, "rho", "rho1", {"lt": "L_half", "eq": "b2", "gt": "L_r1"}),
    "b2": ("beta_2 vs 4/3", 1, "beta", F(4, 3), {"lt": "L_b2", "eq": "r2", "gt": "L_23"}),
    "r2": ("rho_2 vs rho_2*", 1, "rho", "rho2", {"lt": "L_23", "eq": "b3", "gt": "L_r2"}),
    "b3": ("beta_3 vs 5/3", 2, "beta", F(5, 3), {"lt": "L_b3", "eq": "r3", "gt": "L_23"}),
    "r3": ("rho_3 vs rho_3*", 2, "rho", "rho3", {"lt": "L_23", "eq": "b4", "gt": "L_r3"}),
    "b4": ("beta_4 vs 16/9", 3, "beta", F(16, 9), {"lt": "L_b4", "eq": "L_family", "gt": "L_phi3"}),
    "L_b1": [("OU", "stable", _a(0, F(1, 2), 0), UNSPEC, None),
             ("OU", "unstable", _a(0, F(1, 2), 0), UNSPEC, None),
             ("OU", "stable", _a(0, F(1, 2), 0), UNSPEC, None)],
    "L_half": [("OU", "stable", _a(F(1, 2)), UNSPEC, None)],
    "L_r1": [("OU", "stable", _a(F(1, 2)), UNSPEC, None),
             ("OU", "unstable", _a(F(1, 2)), UNSPEC, None),
             ("OU", "stable", _a(F(1, 2)), UNSPEC, None)],
    "L_b2": [("OU", "stable", _a(0, F(1, 2), 1), UNSPEC, None),
             ("OU", "unstable", _a(0, F(1, 2), 1), UNSPEC, None),
             ("OU", "stable", _a(0, F(1, 2), 1), UNSPEC, None)],
    "L_23": [("OU", "stable", _a(F(2, 3)), UNSPEC, None)],
    "L_r2": [("OU", "stable", _a(F(2, 3)), UNSPEC, None),
             ("OU", "unstable", _a(F(2, 3)), UNSPEC, None),
             ("OU", "stable", _a(F(2, 3)), UNSPEC, None)],
    "L_b3": [("OU", "stable", _a(F(1, 3), F(1, 4), 2), UNSPEC, None),
             ("OU", "unstable", _a(F(1, 3), F(1, 4), 2), UNSPEC, None),
             ("OU", "stable", _a(F(2, 3)), UNSPEC, None)],
    "L_r3": [("OU", "stable", _a(F(3, 4)), UNSPEC, None),
             ("OU", "unstable", _a(F(3, 4)), UNSPEC, None),
             ("OU", "stable", _a(F(2, 3)), UNSPEC, None)],
    "L_b4": [("OU", "stable", _a(F(1, 3), F(1, 4), 3), UNSPEC, None),
             ("OU", "unstable", _a(F(1, 3), F(1, 4), 3), UNSPEC, None),
             ("OU", "stable", _a(F(2, 3)), UNSPEC, None)],
    "L_family": [("Phi3", "critical", _a(F(7, 9)), "phi3", None),
                 ("OU", "stable", _a(F(2, 3)), UNSPEC, None)],
    "L_phi3": [("Phi3", "critical", _a(F(7, 9)), "phi3", None),
               ("OU", "stable", _a(F(2, 3)), UNSPEC, None)],
}


def _walk(chart, theta, thresholds, z):
    """Follow the chart; returns (leaf name, path) or (None, reason)."""
    node, path = "b1", []
    while not isinstance(chart[node], list):
        label, i, what, thr, kids = chart[node]
        if i >= len(theta.terms):
            # a missing term is smaller than any charted power
            if what != "beta":
                return None, "no term %d" % i
            side = "gt"
        else:
            rho, beta, lp = theta.terms[i]
            if lp != 0:
                return None, "log term at position %d" % i
            if what == "beta":
                side = {-1: "lt", 0: "eq", 1: "gt"}[(beta > thr) - (beta < thr)]
            else:
                side = {-1: "lt", 0: "eq", 1: "gt"}[z.cmp(label, rho, thresholds[thr])]
        path.append((label, side))
        node = kids[side]
    return node, path


def _alpha(spec, theta):
    c, k, i = spec
    return c + (k * theta.terms[i][1] if i is not None else 0)


# ---------------------------------------------------------------- weakly nonlinear

def _A_of(p, constants):
    if "A" in constants:
        return float(constants["A"])
    Cn = {j: constants.get("C%d_P" % j, constants.get("C%d" % j)) for j in range(3, p.degree)}
    if any(v is None for v in Cn.values()):
        raise KeyError("C_j for j = 3..%d" % (p.degree - 1))
    return float(compute_A([p.value(j) for j in range(p.degree + 1)], Cn, p.degree))


def classify_weakly_nonlinear(p, theta, constants, tol=1e-12):
    bif = detect_bifurcation(p, tol)
    out = Classification("weakly_nonlinear", bif.kind)
    z = _Zero(tol)
    if bif.ambiguous:
        out.status = "ambiguous"
        out.warnings.append("near-tolerance: %s" % ", ".join(bif.ambiguous))
        return out
    if bif.kind == "stable_point":
        if any(b <= 1 for _, b, _ in theta.terms):
            out.status = "uncharted"
            out.warnings.append("stable point needs theta = o(eps)")
            return out
        a1 = p.value(1)
        out.branches = [Branch("OU", F(1, 2), a1, "stable" if a1 > 0 else "unstable", (0.0, 0))]
        return out
    if bif.kind == "saddle_node":
        a2 = p.value(2)
        bs = [b for _, b, _ in theta.terms]
        if any(b < F(3, 2) for b in bs) or any(lp for _, b, lp in theta.terms if b == F(3, 2)):
            out.status = "uncharted"
            out.warnings.append("saddle-node needs theta = O(eps^(3/2))")
            return out
        param = None
        for rho, b, _ in theta.terms:
            if b == F(3, 2):
                param = rho
        out.branches = [Branch("Phi3", F(2, 3), a2, "critical", (0.0, 0), parameter=param,
                               note="family" if param is not None else "")]
        return out
    if bif.kind != "pitchfork":
        out.status = "uncharted"
        out.warnings.append("no charted bifurcation")
        return out

    a3, a1p = p.value(3), p.d1(1)
    A = _A_of(p, constants)
    out.invariant["A"] = A
    if z("A", A):
        return _symmetric_wn(p, theta, constants, out, z)
    sign = 1
    if A < 0:
        # u -> -u flips A and the shifts
        sign, A = -1, -A
        out.warnings.append("A < 0 handled by the reflection u -> -u")
    rs = rho_star(a3, a1p, A)
    out.critical["rho_star"] = rs
    if not theta.terms or theta.terms[0][2] != 0:
        out.status = "uncharted"
        out.warnings.append("asymmetric case needs theta = rho eps^beta + ...")
        return out
    rho1, beta1, _ = theta.terms[0]
    if rho1 <= 0:
        out.status = "qualitative"
        alpha = (1 + beta1) / 2 if beta1 < F(2, 3) else F(5, 6)
        out.branches = [Branch("OU", alpha, UNSPEC, "stable", None,
                               note="rho <= 0: one stable OU, charted only qualitatively")]
        return out
    leaf, path = _walk(WN_CHART, theta, {"rho_star": rs}, z)
    if z.flags:
        out.status = "ambiguous"
        out.warnings.append("near-tolerance: %s" % ", ".join(sorted(set(z.flags))))
        return out
    if leaf is None:
        out.status = "uncharted"
        out.warnings.append(path)
        return out
    used = {"L_b1": 1, "L_unique": 1, "L_roots": 1}.get(leaf, 2)
    if len(theta.terms) > used:
        out.status = "uncharted"
        out.warnings.append("theta has more terms than the chart resolves")
        return out
    if leaf in ("L_split",) and theta.terms[1][0] <= 0:
        out.status = "qualitative"
        out.warnings.append("rho_2 <= 0 below 8/9 is not charted")
        return out
    roots = cubic_roots(rs if leaf not in ("L_roots",) else rho1, a3, a1p, A, tol=max(tol, 1e-12))
    r1 = -np.cbrt(A / (2 * a3))
    r2 = roots[-1][0] if leaf not in ("L_roots",) else None
    c3 = phi3_coupling(a3, A)
    if leaf == "L_roots":
        for r, mult, stab, d in roots:
            out.branches.append(Branch("OU", F(5, 6), d, stab, (sign * r, F(1, 3))))
        return out
    for fam, stab, aspec, ckey, hkey in WN_CHART[leaf]:
        alpha = _alpha(aspec, theta)
        if ckey == "outer":
            coef = 2 * abs(a1p) * rho1
        elif ckey == "middle":
            coef = -abs(a1p) * rho1
        elif ckey == "unique":
            coef = 3 * np.cbrt(a3 * A * A)
        elif ckey == "phi3":
            coef = sign * c3
        elif ckey == "fprime_r2":
            coef = 3 * a3 * r2 * r2 + rs * a1p
        else:
            coef = ckey
        s = math.sqrt(rho1 * abs(a1p) / a3) if leaf == "L_b1" else None
        h = {"outer-": (-s, beta1 / 2) if s else None,
             "outer+": (s, beta1 / 2) if s else None,
             "middle": (-A / (abs(a1p) * rho1), 1 - beta1),
             "unique": (np.cbrt(A / a3), F(1, 3)),
             "r1": (r1, F(1, 3)), "r2": (r2, F(1, 3))}.get(hkey)
        if h is not None and h[0] is not None:
            h = (sign * float(h[0]), h[1])
        param = theta.terms[1][0] if leaf == "L_family" and fam == "Phi3" else None
        out.branches.append(Branch(fam, alpha, float(coef) if not isinstance(coef, str) else coef,
                                   stab, h, parameter=param,
                                   note="family indexed by rho_2" if param is not None else ""))
    return out


def _symmetric_wn(p, theta, constants, out, z):
    a3, a1p = p.value(3), p.d1(1)
    mu = 18 * a3 ** 2 * constants["c2"] / a1p
    out.critical["mu"] = mu
    ts = theta.terms
    ok = len(ts) >= 1 and ts[0][1] == 1 and ts[0][2] == 1 and z.cmp("mu", ts[0][0], mu) == 0
    lam = 0.0
    if ok and len(ts) >= 2:
        ok = len(ts) == 2 and ts[1][1] == 1 and ts[1][2] == 0
        lam = ts[1][0]
    if z.flags:
        out.status = "ambiguous"
        out.warnings.append("near-tolerance: %s" % ", ".join(sorted(set(z.flags))))
        return out
    if not ok:
        out.status = "uncharted"
        out.warnings.append("symmetric case needs theta = mu eps|log eps| + lambda eps")
        return out
    out.branches = [Branch("Phi4", F(1), a3, "critical", (0.0, 0), parameter=lam,
                           note="family indexed by lambda")]
    return out


# ---------------------------------------------------------------- weak noise

def classify_weak_noise(p, theta, constants, tol=1e-12):
    bif = detect_bifurcation(p, tol)
    out = Classification("weak_noise", bif.kind)
    z = _Zero(tol)
    if bif.ambiguous:
        out.status = "ambiguous"
        out.warnings.append("near-tolerance: %s" % ", ".join(bif.ambiguous))
        return out
    if bif.kind != "pitchfork":
        out.status = "uncharted"
        out.warnings.append("weak-noise charts need a pitchfork")
        return out
    a3, a1p, C0 = p.value(3), p.d1(1), float(constants["C0"])
    B = _B_of(p)
    out.invariant["B"] = B
    if z("B", B):
        return _symmetric_noise(p, theta, constants, out, z)
    sign = 1
    if B < 0:
        sign = -1
        out.warnings.append("B < 0 handled by the reflection u -> -u")
    r1, r2, r3 = rho_stars(a3, a1p, C0, abs(B))
    out.critical["theta_star"] = [r1, r2, r3]
    if not theta.terms:
        out.status = "uncharted"
        out.warnings.append("empty theta")
        return out
    if any(r <= 0 for r, _, _ in theta.terms):
        out.status = "qualitative"
        out.branches = [Branch("OU", UNSPEC, UNSPEC, "stable", None,
                               note="negative rho_j: one stable OU, charted only qualitatively")]
        return out
    leaf, path = _walk(NOISE_CHART, theta, {"rho1": r1, "rho2": r2, "rho3": r3}, z)
    if z.flags:
        out.status = "ambiguous"
        out.warnings.append("near-tolerance: %s" % ", ".join(sorted(set(z.flags))))
        return out
    if leaf is None:
        out.status = "uncharted"
        out.warnings.append(path)
        return out
    if len(theta.terms) > len(path):
        out.status = "uncharted"
        out.warnings.append("theta has more terms than the chart resolves")
        return out
    derived = sign * 3 * float(np.cbrt(3 * a3 * a3 * abs(B) * C0 * C0 / 2))
    for fam, stab, aspec, ckey, hkey in NOISE_CHART[leaf]:
        b = Branch(fam, _alpha(aspec, theta), UNSPEC, stab, None)
        if fam == "Phi3":
            b.derived = derived
            b.note = "coupling proportional to B^(1/3)"
            if leaf == "L_family":
                b.parameter = theta.terms[3][0]
                b.note += "; family indexed by rho_4"
        out.branches.append(b)
    return out


def _symmetric_noise(p, theta, constants, out, z):
    a3, a1p, C0, c2 = p.value(3), p.d1(1), float(constants["C0"]), float(constants["c2"])
    t1 = -3 * a3 * C0 / a1p
    t2 = 18 * a3 ** 2 * c2 / a1p
    rho = (3 * p.d1(2) * a3 * C0 / a1p - 6 * p.value(4) * C0) / (3 * a3)
    out.critical["theta"] = [t1, t2]
    ts = theta.terms
    ok = len(ts) >= 2 and ts[0][1:] == (1, 0) and ts[1][1:] == (2, 1) \
        and z.cmp("theta_1", ts[0][0], t1) == 0 and z.cmp("theta_2", ts[1][0], t2) == 0
    lam = 0.0
    if ok and len(ts) == 3:
        ok = ts[2][1:] == (2, 0)
        lam = ts[2][0]
    ok = ok and len(ts) <= 3
    if z.flags:
        out.status = "ambiguous"
        out.warnings.append("near-tolerance: %s" % ", ".join(sorted(set(z.flags))))
        return out
    if not ok:
        out.status = "uncharted"
        out.warnings.append("B = 0 needs theta = t1 eps + t2 eps^2|log eps| + lambda eps^2")
        return out
    out.branches = [Branch("Phi4", F(1), a3, "critical", (rho, F(1)), parameter=lam,
                           note="family indexed by lambda, with an additional constant")]
    return out


def classify(p, theta, constants, tol=1e-12):
    if p.regime == "weak_noise":
        return classify_weak_noise(p, theta, constants, tol)
    return classify_weakly_nonlinear(p, theta, constants, tol)
