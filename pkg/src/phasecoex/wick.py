"""Hermite algebra, the Wick and mass maps on symbols, Gaussian smoothing of
polynomials and the h-shift of Taylor coefficients.

Polynomials are plain coefficient lists ``[p0, p1, ...]`` over whatever ring
the entries live in (Fraction, float or sympy expressions).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import sympy

from .symbols import ONE, PSI, Symbol, eps, integ, mul, psi_pow, render, pretty

__all__ = [
    "trim", "peval", "padd", "pscale", "pmul", "pderiv", "taylor_shift",
    "hermite", "double_factorial", "gaussian_smooth", "LinComb",
    "wick_derivative", "wick_map", "mass_pattern", "m0_map", "ThetaSeries",
    "shift_expand", "ShiftedCoefficients", "hermite_rewrite",
    "effective_coefficients", "hermite_eval",
]


# ---------------------------------------------------------------- polynomials

def _is_zero(c):
    if isinstance(c, sympy.Basic):
        return sympy.expand(c) == 0
    return c == 0


def trim(p):
    p = list(p)
    while p and _is_zero(p[-1]):
        p.pop()
    return p


def peval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def padd(p, q):
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def pscale(p, c):
    return trim([c * a for a in p])


def pmul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def pderiv(p):
    return trim([i * p[i] for i in range(1, len(p))])


def taylor_shift(p, h):
    """Coefficients of x -> p(x + h)."""
    n = len(p)
    return trim([sum(comb(k, j) * p[k] * h ** (k - j) for k in range(j, n)) for j in range(n)])


def hermite(k, C):
    """H_k(x; C) via H_k = x H_{k-1} - (k-1) C H_{k-2}, monic."""
    if k < 0:
        raise ValueError("k must be non-negative")
    h0, h1 = [1], [0, 1]
    if k == 0:
        return h0
    for j in range(2, k + 1):
        h0, h1 = h1, padd([0] + h1, pscale(h0, -(j - 1) * C))
    return h1


def hermite_eval(k, x, C):
    """H_k(x; C) by the recursion, vectorised over numpy arrays."""
    if k == 0:
        return x * 0 + 1
    a, b = x * 0 + 1, x
    for j in range(2, k + 1):
        a, b = b, x * b - (j - 1) * C * a
    return b


def double_factorial(n):
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def gaussian_smooth(p, v):
    """q(x) = E p(x + y), y ~ N(0, v)."""
    if not isinstance(v, sympy.Basic) and v < 0:
        raise ValueError("negative variance")
    n = len(p)
    out = []
    for i in range(n):
        acc = 0
        r = 0
        while i + 2 * r < n:
            acc += comb(i + 2 * r, i) * p[i + 2 * r] * double_factorial(2 * r - 1) * v ** r
            r += 1
        out.append(acc)
    return trim(out)


# ---------------------------------------------------------------- linear combinations

class LinComb:
    """Finite formal sum of symbols with sympy coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        for s, c in (terms or {}).items():
            c = sympy.expand(sympy.sympify(c))
            if c != 0:
                t[s] = c
        self.terms = t

    @classmethod
    def of(cls, sym, coef=1):
        return cls({sym: coef})

    def __add__(self, other):
        t = dict(self.terms)
        for s, c in other.terms.items():
            t[s] = t.get(s, 0) + c
        return LinComb(t)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return LinComb({s: c * v for s, v in self.terms.items()})

    def apply(self, f):
        """Extend f: Symbol -> LinComb linearly."""
        out = LinComb()
        for s, c in self.terms.items():
            out = out + f(s).scale(c)
        return out

    def subs(self, values):
        return LinComb({s: c.subs(values) for s, c in self.terms.items()})

    def coeff(self, sym):
        return self.terms.get(sym, sympy.Integer(0))

    def __eq__(self, other):
        if not isinstance(other, LinComb):
            return NotImplemented
        d = self - other
        return not d.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda kv: kv[0]._key))

    def __repr__(self):
        return self.show(render)

    def show(self, fmt=pretty):
        if not self.terms:
            return "0"
        return " + ".join("(%s)*%s" % (c, fmt(s)) for s, c in self)


# ---------------------------------------------------------------- Wick map

def _split_psi(tau):
    fs = tau.factors
    p = sum(1 for f in fs if f == PSI)
    return p, [f for f in fs if f != PSI]


def _lift(sym):
    # the truncated kernel annihilates polynomials, so I(X^k) is dropped
    return sym.kind not in ("one", "x")


@lru_cache(maxsize=None)
def _wick_derivative(tau):
    kd = tau.kind
    if kd in ("one", "xi", "x"):
        return ()
    out = {}
    if kd == "i":
        if tau == PSI:
            return ()
        for t, c in _wick_derivative(tau.args[0]):
            if _lift(t):
                s = integ(t)
                out[s] = out.get(s, 0) + c
        return tuple(out.items())
    if kd == "e":
        for t, c in _wick_derivative(tau.args[0]):
            s = eps(tau.data, t)
            out[s] = out.get(s, 0) + c
        return tuple(out.items())
    p, rest = _split_psi(tau)
    if p >= 2:
        s = mul(psi_pow(p - 2), *rest)
        out[s] = out.get(s, 0) + comb(p, 2)
    for j, f in enumerate(rest):
        if f.kind not in ("i", "e"):
            continue
        for t, c in _wick_derivative(f):
            s = mul(psi_pow(p), *rest[:j], t, *rest[j + 1:])
            out[s] = out.get(s, 0) + c
    return tuple((s, c) for s, c in out.items() if c)


def wick_derivative(x):
    """The derivation L with L Psi^k = C(k,2) Psi^{k-2}, extended by Leibniz."""
    if isinstance(x, Symbol):
        return LinComb(dict(_wick_derivative(x)))
    return x.apply(lambda s: LinComb(dict(_wick_derivative(s))))


def wick_map(x, C1=sympy.Symbol("C1")):
    """exp(-C1 L) applied to a symbol or a LinComb."""
    cur = LinComb.of(x) if isinstance(x, Symbol) else x
    total = cur
    j = 0
    while cur.terms:
        j += 1
        cur = wick_derivative(cur)
        total = total + cur.scale((-C1) ** j / sympy.factorial(j))
    return total


# ---------------------------------------------------------------- mass map

def _strip_eps(tau):
    if tau.kind == "e":
        return tau.data, tau.args[0]
    return 0, tau


def _pure_psi(tau):
    p, rest = _split_psi(tau)
    return p if not rest else None


def mass_pattern(tau):
    """Match E^a(Psi^p I(E^b Psi^q)) against the mass rules.

    Returns (coefficient, image symbol, n, primed) or None.
    """
    two_a, body = _strip_eps(tau)
    p, rest = _split_psi(body)
    if len(rest) != 1 or rest[0].kind != "i":
        return None
    two_b, inner = _strip_eps(rest[0].args[0])
    q = _pure_psi(inner)
    if q is None or q == 0:
        return None
    n = p
    if n >= 2 and two_a == n - 2 and two_b == n - 2:
        if q == n:
            return factorial(n), ONE, n, False
        if q == n + 1:
            return factorial(n + 1), PSI, n, False
    if n >= 3 and two_a == n - 1 and two_b == n - 3 and q == n:
        return factorial(n), ONE, n, False
    if p >= 4 and two_a == p - 2 and two_b == p - 4 and q == p - 1:
        # E^{(n-1)/2}(Psi^{n+1} I(E^{(n-3)/2} Psi^n)) with n = p - 1
        m = p - 1
        return factorial(m + 1), PSI, m, False
    if n >= 3 and two_a == n - 2 and two_b == n - 3 and q == n:
        return factorial(n), ONE, n, True
    return None


def _const(table, n, primed):
    if table is None:
        return sympy.Symbol("C%d'" % n if primed else "C%d" % n)
    return table[n]


def m0_map(x, Cn=None, Cnp=None):
    """M0 = id - sum C_n L_n - sum C_n' L_n'.  Cn/Cnp map n to values."""
    def one(tau):
        out = LinComb.of(tau)
        hit = mass_pattern(tau)
        if hit is None:
            return out
        c, img, n, primed = hit
        C = _const(Cnp if primed else Cn, n, primed)
        return out - LinComb.of(img, c * C)
    if isinstance(x, Symbol):
        return one(x)
    return x.apply(one)


# ---------------------------------------------------------------- Taylor data

@dataclass(frozen=True)
class ThetaSeries:
    """Value and first two theta-derivatives of one coefficient at theta = 0."""
    value: object = 0
    d1: object = 0
    d2: object = 0

    def at(self, theta):
        return self.value + self.d1 * theta + self.d2 * theta ** 2 / 2

    def expr(self, theta):
        return _sym(self.value) + _sym(self.d1) * theta + _sym(self.d2) * theta ** 2 / 2

    def to_dict(self):
        return {"a": _num(self.value), "a1": _num(self.d1), "a2": _num(self.d2)}


def _sym(x):
    if isinstance(x, sympy.Basic):
        return x
    if isinstance(x, (int, Fraction)):
        return sympy.Rational(x.numerator, x.denominator)
    return sympy.Float(x)


def _num(x):
    if isinstance(x, Fraction):
        return float(x) if x.denominator != 1 else int(x)
    return x


class ShiftedCoefficients(list):
    """List of shifted coefficients; ``remainder[j]`` is the order of the
    dropped h-power (None when nothing was truncated)."""
    remainder = None


def shift_expand(acoeffs, h, m=None, theta=sympy.Symbol("theta"), truncate=None):
    """a_j^(h)(theta) = sum_{k=j}^m C(k,j) a_k(theta) h^(k-j).

    theta is carried to second order through the ThetaSeries.  With
    ``truncate=6`` the sum stops at k = 6 and the remainder order 7 - j is
    recorded, as in the weak-noise expansion.
    """
    m = len(acoeffs) - 1 if m is None else m
    if m != len(acoeffs) - 1:
        raise ValueError("degree %d does not match %d coefficients" % (m, len(acoeffs)))
    top = m if truncate is None else min(m, truncate)
    exprs = [a.expr(theta) for a in acoeffs]
    out = ShiftedCoefficients()
    for j in range(m + 1):
        e = sum((comb(k, j) * exprs[k] * h ** (k - j) for k in range(j, top + 1)), sympy.Integer(0))
        out.append(sympy.expand(e))
    if truncate is not None and m > truncate:
        out.remainder = [truncate + 1 - j for j in range(m + 1)]
    elif truncate is not None:
        out.remainder = [None] * (m + 1)
    return out


def hermite_rewrite(Vprime, delta, h, C1):
    """b_j with V'(delta^(1/2) u + h) = sum_j b_j delta^(j/2) H_j(u; C1).

    Uses the smoothing variance delta*C1.  Exact for rational inputs.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    return gaussian_smooth(taylor_shift(list(Vprime), h), delta * C1)


def effective_coefficients(coeffs, C0):
    """Smooth each Taylor slot of V_theta' with variance C0 (the effective
    potential coefficients a-hat)."""
    vals = gaussian_smooth([c.value for c in coeffs], C0)
    d1 = gaussian_smooth([c.d1 for c in coeffs], C0)
    d2 = gaussian_smooth([c.d2 for c in coeffs], C0)
    n = len(coeffs)
    pad = lambda p: list(p) + [0] * (n - len(p))
    return [ThetaSeries(a, b, c) for a, b, c in zip(pad(vals), pad(d1), pad(d2))]
