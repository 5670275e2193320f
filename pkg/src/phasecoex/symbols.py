"""Graded symbol sets for the near-critical regularity structure.

Symbols are immutable trees over ``1``, ``Xi``, ``X^k``, ``I(.)``, ``E^b(.)``
and commutative products.  Homogeneities are exact pairs ``q + n*kappa``
compared in the limit kappa -> 0+.
"""

from fractions import Fraction
from functools import lru_cache, total_ordering
from itertools import combinations_with_replacement
from math import comb
import re

__all__ = [
    "Hom", "Symbol", "ONE", "XI", "PSI", "poly", "integ", "eps", "mul",
    "psi_pow", "homogeneity", "render", "parse", "pretty", "multi_indices",
    "parabolic_degree", "SymbolSet", "generate_basis", "closure_pass",
    "ex_arguments", "tplus_generators", "Generator",
]


@total_ordering
class Hom:
    """Exact homogeneity ``q + nk*kappa``."""

    __slots__ = ("q", "nk")

    def __init__(self, q=0, nk=0):
        object.__setattr__(self, "q", Fraction(q))
        object.__setattr__(self, "nk", int(nk))

    def __setattr__(self, name, value):
        raise AttributeError("Hom is immutable")

    def __add__(self, other):
        other = _as_hom(other)
        return Hom(self.q + other.q, self.nk + other.nk)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_hom(other)
        return Hom(self.q - other.q, self.nk - other.nk)

    def __neg__(self):
        return Hom(-self.q, -self.nk)

    def __mul__(self, k):
        return Hom(self.q * k, self.nk * k)

    __rmul__ = __mul__

    def _key(self):
        return (self.q, self.nk)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Hom(other)
        return isinstance(other, Hom) and self._key() == other._key()

    def __lt__(self, other):
        return self._key() < _as_hom(other)._key()

    def __hash__(self):
        return hash(self._key())

    def value(self, kappa):
        return float(self.q + self.nk * Fraction(kappa))

    def __str__(self):
        s = str(self.q)
        if self.nk == 0:
            return s
        if s == "0":
            s = ""
        k = abs(self.nk)
        sign = "-" if self.nk < 0 else "+"
        if not s and sign == "+":
            sign = ""
        return s + sign + ("" if k == 1 else str(k)) + "k"

    def __repr__(self):
        return "Hom(%s)" % self


def _as_hom(x):
    return x if isinstance(x, Hom) else Hom(x)


_RANK = {"one": 0, "xi": 1, "x": 2, "i": 3, "e": 4, "prod": 5}


class Symbol:
    """Canonical symbol tree.  Build through the module constructors."""

    __slots__ = ("kind", "data", "args", "_key", "_hash")

    def __init__(self, kind, data=(), args=()):
        s = object.__setattr__
        s(self, "kind", kind)
        s(self, "data", data)
        s(self, "args", tuple(args))
        key = (_RANK[kind], data, tuple(a._key for a in self.args))
        s(self, "_key", key)
        s(self, "_hash", hash(key))

    def __setattr__(self, name, value):
        raise AttributeError("Symbol is immutable")

    def __eq__(self, other):
        return isinstance(other, Symbol) and self._hash == other._hash and self._key == other._key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self._key < other._key

    def __le__(self, other):
        return self._key <= other._key

    def __repr__(self):
        return "Symbol(%s)" % render(self)

    def __str__(self):
        return render(self)

    def __mul__(self, other):
        return mul(self, other)

    @property
    def factors(self):
        if self.kind == "prod":
            return self.args
        if self.kind == "one":
            return ()
        return (self,)


ONE = Symbol("one")
XI = Symbol("xi")


def poly(k):
    k = tuple(int(v) for v in k)
    if len(k) != 4 or min(k) < 0:
        raise ValueError("multi-index must have four non-negative entries")
    if not any(k):
        return ONE
    return Symbol("x", k)


def integ(tau):
    return Symbol("i", (), (tau,))


def eps(two_beta, tau):
    """E^{two_beta/2}(tau); the zero power is the identity."""
    two_beta = int(two_beta)
    if two_beta < 0:
        raise ValueError("negative epsilon power")
    if two_beta == 0:
        return tau
    return Symbol("e", two_beta, (tau,))


PSI = integ(XI)


def mul(*syms):
    facs = []
    k = [0, 0, 0, 0]
    for s in syms:
        for f in s.factors:
            if f.kind == "x":
                k = [a + b for a, b in zip(k, f.data)]
            else:
                facs.append(f)
    p = poly(k)
    if p is not ONE:
        facs.append(p)
    if not facs:
        return ONE
    if len(facs) == 1:
        return facs[0]
    return Symbol("prod", (), sorted(facs))


def psi_pow(k):
    return mul(*([PSI] * k)) if k else ONE


def parabolic_degree(k):
    return 2 * k[0] + k[1] + k[2] + k[3]


def multi_indices(d):
    """All multi-indices of parabolic degree d."""
    out = []
    for k0 in range(d // 2 + 1):
        r = d - 2 * k0
        for k1 in range(r + 1):
            for k2 in range(r - k1 + 1):
                out.append((k0, k1, k2, r - k1 - k2))
    return out


XI_HOM = Hom(Fraction(-5, 2), -1)


@lru_cache(maxsize=None)
def homogeneity(tau):
    kd = tau.kind
    if kd == "one":
        return Hom(0)
    if kd == "xi":
        return XI_HOM
    if kd == "x":
        return Hom(parabolic_degree(tau.data))
    if kd == "i":
        return homogeneity(tau.args[0]) + 2
    if kd == "e":
        return homogeneity(tau.args[0]) + Fraction(tau.data, 2)
    h = Hom(0)
    for f in tau.args:
        h = h + homogeneity(f)
    return h


# ---------------------------------------------------------------- text form

def render(tau):
    kd = tau.kind
    if kd == "one":
        return "1"
    if kd == "xi":
        return "Xi"
    if kd == "x":
        return "X^(%d,%d,%d,%d)" % tau.data
    if kd == "i":
        return "I(%s)" % render(tau.args[0])
    if kd == "e":
        return "E^{%d/2}(%s)" % (tau.data, render(tau.args[0]))
    return "".join(render(f) for f in tau.args)


_TOK = re.compile(r"\s*(Xi|X\^\((\d+),(\d+),(\d+),(\d+)\)|I\(|E\^\{(\d+)/2\}\(|1|\))")


def parse(text):
    """Inverse of :func:`render`."""
    pos, tau = _parse_prod(text, 0)
    if text[pos:].strip():
        raise ValueError("trailing input at %d: %r" % (pos, text[pos:]))
    return tau


def _parse_prod(text, pos):
    facs = []
    while True:
        m = _TOK.match(text, pos)
        if m is None or m.group(1) == ")":
            break
        tok = m.group(1)
        pos = m.end()
        if tok == "Xi":
            facs.append(XI)
        elif tok == "1":
            facs.append(ONE)
        elif tok.startswith("X^"):
            facs.append(poly(int(m.group(i)) for i in range(2, 6)))
        else:
            pos, inner = _parse_prod(text, pos)
            m2 = _TOK.match(text, pos)
            if m2 is None or m2.group(1) != ")":
                raise ValueError("unbalanced parenthesis at %d" % pos)
            pos = m2.end()
            facs.append(integ(inner) if tok == "I(" else eps(int(m.group(6)), inner))
    if not facs:
        raise ValueError("empty expression at %d" % pos)
    return pos, mul(*facs)


def pretty(tau):
    """Human-oriented form with Psi powers, e.g. ``E^{1/2}(Psi^4)``."""
    kd = tau.kind
    if tau == PSI:
        return "Psi"
    if kd in ("one", "xi", "x"):
        if kd == "x":
            names = ["t", "x1", "x2", "x3"]
            return "".join(n if e == 1 else "%s^%d" % (n, e) for n, e in zip(names, tau.data) if e)
        return render(tau)
    if kd == "i":
        return "I(%s)" % pretty(tau.args[0])
    if kd == "e":
        b = Fraction(tau.data, 2)
        return "E^{%s}(%s)" % (b, pretty(tau.args[0]))
    npsi = sum(1 for f in tau.args if f == PSI)
    rest = [pretty(f) for f in tau.args if f != PSI]
    head = [] if npsi == 0 else ["Psi" if npsi == 1 else "Psi^%d" % npsi]
    return " ".join(head + rest)


# ---------------------------------------------------------------- generation

class SymbolSet:
    """Result of :func:`generate_basis`.

    ``members`` holds the basis W below the cutoff, ``extension`` the
    E-arguments that are not themselves in W.  ``tags`` maps each symbol
    to a frozenset drawn from {"U", "V", "W", "W_ex"}.
    """

    def __init__(self, m, gamma, kappa, U, V, extension):
        self.m, self.gamma, self.kappa = m, Fraction(gamma), Fraction(kappa)
        self.U = frozenset(U)
        self.V = frozenset(V)
        self.members = frozenset(self.U | self.V)
        self.extension = frozenset(extension) - self.members
        tags = {}
        for s in self.members:
            t = {"W", "W_ex"}
            if s in self.U:
                t.add("U")
            if s in self.V:
                t.add("V")
            tags[s] = frozenset(t)
        for s in self.extension:
            tags[s] = frozenset({"W_ex"})
        self.tags = tags

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.sorted())

    def __contains__(self, s):
        return s in self.members

    def sorted(self):
        return sorted(self.members, key=lambda s: (homogeneity(s), s._key))


def _check_params(m, gamma, kappa):
    m = int(m)
    kappa = Fraction(kappa)
    if m < 4:
        raise ValueError("degree m must be at least 4")
    if not 0 < kappa < Fraction(1, 8 * m):
        raise ValueError("kappa=%s violates 0 < kappa < 1/(8m) = %s" % (kappa, Fraction(1, 8 * m)))
    return m, Fraction(gamma), kappa


def _products(pool, nmax, cap, offset):
    """Multisets of at most nmax symbols from pool with offset + sum q <= cap.

    pool is sorted by rational homogeneity; the rational parts suffice for
    the cut since kappa only enters through the final strict comparison.
    """
    qs = [homogeneity(s).q for s in pool]
    out = []

    def rec(start, chosen, total):
        out.append(tuple(chosen))
        if len(chosen) == nmax:
            return
        left = nmax - len(chosen)
        for i in range(start, len(pool)):
            q = qs[i]
            # remaining factors have q >= this one
            best = offset + total + q + (left - 1) * min(q, 0)
            if best > cap and q >= 0:
                break
            if best > cap:
                continue
            chosen.append(pool[i])
            rec(i, chosen, total + q)
            chosen.pop()

    rec(0, [], Fraction(0))
    return out


def closure_pass(U, V, m, gamma):
    """One application of the generation rules; returns enlarged (U, V).

    U is capped at rational homogeneity gamma + 1 (anything above can only
    enter V-products that already exceed gamma), V at gamma.
    """
    gamma = Fraction(gamma)
    ucap = gamma + 1
    U, V = set(U), set(V)
    pool = sorted((s for s in U if s != ONE), key=lambda s: (homogeneity(s).q, s._key))
    for tup in _products(pool, 3, gamma, 0):
        V.add(mul(*tup))
    for k in range(1, m - 2):
        for tup in _products(pool, k + 3, gamma, Fraction(k, 2)):
            V.add(eps(k, mul(*tup)))
    for s in list(V):
        if s.kind in ("x", "one"):
            continue
        if homogeneity(s).q + 2 <= ucap:
            U.add(integ(s))
    V = {s for s in V if homogeneity(s).q <= gamma}
    return U, V


def _initial(gamma):
    ucap = Fraction(gamma) + 1
    U = {ONE}
    d = 1
    while d <= ucap:
        U.update(poly(k) for k in multi_indices(d))
        d += 1
    return U, {XI}


def generate_basis(m, gamma, kappa=Fraction(1, 1000)):
    """All symbols of W below gamma plus the E-argument extension."""
    m, gamma, kappa = _check_params(m, gamma, kappa)
    U, V = _initial(gamma)
    while True:
        U2, V2 = closure_pass(U, V, m, gamma)
        if U2 == U and V2 == V:
            break
        U, V = U2, V2
    cut = Hom(gamma)
    Uw = {s for s in U if homogeneity(s) < cut}
    Vw = {s for s in V if homogeneity(s) < cut}
    ext = ex_arguments(Vw)
    return SymbolSet(m, gamma, kappa, Uw, Vw, ext)


def ex_arguments(symbols):
    return {s.args[0] for s in symbols if s.kind == "e"}


# ---------------------------------------------------------------- T_+ listing

class Generator:
    """A generator family entry with its admissible multi-indices."""

    def __init__(self, family, symbol, ells, two_beta=0):
        self.family = family
        self.symbol = symbol
        self.ells = tuple(ells)
        self.two_beta = two_beta

    def __repr__(self):
        return "Generator(%s, %s, %d ells)" % (self.family, render(self.symbol), len(self.ells))

    def to_dict(self):
        return {"family": self.family, "sym": render(self.symbol),
                "two_beta": self.two_beta, "ells": [list(l) for l in self.ells]}


def _ells_between(lo, hi, strict_lo=False):
    """Multi-indices l with lo <= |l| < hi (or lo < |l| with strict_lo)."""
    out = []
    d = 0
    while Hom(d) < hi:
        h = Hom(d)
        if (lo < h) or (not strict_lo and h == lo):
            out.extend(multi_indices(d))
        d += 1
    return out


def tplus_generators(W):
    """Generators of T_+: F1 = {1, X}, F2 = J_l(tau), F3 = E_l^{k/2}(prod)."""
    gens = [Generator("F1", ONE, [(0, 0, 0, 0)])]
    gens += [Generator("F1", poly(k), [(0, 0, 0, 0)]) for k in multi_indices(1)]
    for tau in W.sorted():
        if tau.kind in ("x", "one"):
            continue
        ells = _ells_between(Hom(0), homogeneity(tau) + 2)
        if ells:
            gens.append(Generator("F2", tau, ells))
    for tau in W.sorted():
        if tau.kind != "e":
            continue
        inner = homogeneity(tau.args[0])
        top = inner + Fraction(tau.data, 2)
        ells = [l for l in _ells_between(Hom(0), top) if not Hom(parabolic_degree(l)) < inner]
        if ells:
            gens.append(Generator("F3", tau.args[0], ells, tau.data))
    return gens
