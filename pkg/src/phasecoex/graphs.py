"""Labelled-graph power counting.

A labelled graph carries, per edge, a singularity degree ``a`` (a linear
form in the infinitesimals delta and kappa) and a renormalisation order
``r``.  The four integrability conditions are checked by brute-force
subset enumeration, and the lambda-exponent 5|V \\ V*| - sum a is reported
together with the remaining power of epsilon.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
import re

from .symbols import PSI, Symbol, homogeneity, mul, psi_pow, integ, eps as eps_sym
from .wick import double_factorial

DIM = 5  # parabolic dimension of space-time R^{1+3}
ZETA = Fraction(6, 5)
MAX_VERTICES = 20

__all__ = [
    "Lin", "Edge", "LabelledGraph", "Verdict", "check_assumption",
    "lambda_exponent", "reduce_epsilon", "merge_edges", "weaken_edge",
    "drop_vertex", "parse_graph", "format_graph", "ChaosComponent",
    "chaos_components", "second_moment_graph", "mean_graph", "renormalised_graphs", "DIM", "ZETA",
]


class Lin:
    """q + d*delta + k*kappa with rational coefficients."""

    __slots__ = ("q", "d", "k")

    def __init__(self, q=0, d=0, k=0):
        object.__setattr__(self, "q", Fraction(q))
        object.__setattr__(self, "d", Fraction(d))
        object.__setattr__(self, "k", Fraction(k))

    def __setattr__(self, n, v):
        raise AttributeError("Lin is immutable")

    @staticmethod
    def coerce(x):
        if isinstance(x, Lin):
            return x
        if isinstance(x, str):
            return Lin.parse(x)
        return Lin(x)

    def __add__(self, o):
        o = Lin.coerce(o)
        return Lin(self.q + o.q, self.d + o.d, self.k + o.k)

    __radd__ = __add__

    def __sub__(self, o):
        o = Lin.coerce(o)
        return Lin(self.q - o.q, self.d - o.d, self.k - o.k)

    def __rsub__(self, o):
        return Lin.coerce(o) - self

    def __neg__(self):
        return Lin(-self.q, -self.d, -self.k)

    def __mul__(self, c):
        return Lin(self.q * c, self.d * c, self.k * c)

    __rmul__ = __mul__

    def __eq__(self, o):
        try:
            o = Lin.coerce(o)
        except (TypeError, ValueError):
            return NotImplemented
        return (self.q, self.d, self.k) == (o.q, o.d, o.k)

    def __hash__(self):
        return hash((self.q, self.d, self.k))

    def key(self, order="delta_first"):
        if order == "delta_first":
            return (self.q, self.d, self.k)
        if order == "kappa_first":
            return (self.q, self.k, self.d)
        raise ValueError(order)

    def sign(self, order="delta_first"):
        for c in self.key(order):
            if c:
                return 1 if c > 0 else -1
        return 0

    def lt(self, o, order="delta_first"):
        return (Lin.coerce(o) - self).sign(order) > 0

    def gt(self, o, order="delta_first"):
        return (self - Lin.coerce(o)).sign(order) > 0

    def __lt__(self, o):
        return self.lt(o)

    def __gt__(self, o):
        return self.gt(o)

    def __le__(self, o):
        return not self.gt(o)

    def __ge__(self, o):
        return not self.lt(o)

    def __str__(self):
        parts = []
        for c, name in ((self.q, ""), (self.d, "d"), (self.k, "k")):
            if c == 0:
                continue
            if name and abs(c) == 1:
                body = name
            else:
                body = str(abs(c)) + name
            parts.append(("-" if c < 0 else "+") + body)
        if not parts:
            return "0"
        s = "".join(parts)
        return s[1:] if s[0] == "+" else s

    def __repr__(self):
        return "Lin(%s)" % self

    _TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?([dk]?)")

    @classmethod
    def parse(cls, text):
        text = text.replace(" ", "")
        if not text:
            raise ValueError("empty exponent")
        q = d = k = Fraction(0)
        pos = 0
        while pos < len(text):
            m = cls._TERM.match(text, pos)
            if m is None or m.end() == pos:
                raise ValueError("bad exponent %r" % text)
            sgn, num, var = m.groups()
            if num is None and not var:
                raise ValueError("bad exponent %r" % text)
            c = Fraction(num) if num else Fraction(1)
            if sgn == "-":
                c = -c
            if var == "d":
                d += c
            elif var == "k":
                k += c
            else:
                q += c
            pos = m.end()
        return cls(q, d, k)


@dataclass(frozen=True)
class Edge:
    tail: str
    head: str
    a: Lin = Lin(0)
    r: int = 0
    eps: bool = False
    kind: str = "kernel"
    name: str = ""


@dataclass
class LabelledGraph:
    vertices: list
    edges: list
    origin: str = "0"
    prefactor: Lin = field(default_factory=Lin)

    def __post_init__(self):
        self.vertices = list(self.vertices)
        self.edges = list(self.edges)
        self.prefactor = Lin.coerce(self.prefactor)
        self.validate()

    def validate(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertex")
        if self.origin not in vs:
            raise ValueError("origin %r missing" % self.origin)
        if len(vs) > MAX_VERTICES:
            raise ValueError("more than %d vertices" % MAX_VERTICES)
        tests = [e for e in self.edges if e.kind == "test"]
        if len(tests) > 2:
            raise ValueError("at most two test-function legs")
        for e in self.edges:
            if e.tail not in vs or e.head not in vs:
                raise ValueError("edge %s->%s references unknown vertex" % (e.tail, e.head))
            if e.kind == "test" and self.origin not in (e.tail, e.head):
                raise ValueError("test-function leg must touch the origin")
            if e.kind == "kernel" and e.tail == e.head:
                raise ValueError("self loop at %s" % e.tail)
        neg = {}
        for e in self.edges:
            if e.r < 0:
                for v in (e.tail, e.head):
                    if v in neg and v != self.origin:
                        raise ValueError("two negatively renormalised edges meet at %s" % v)
                    neg[v] = e

    @property
    def kernels(self):
        return [e for e in self.edges if e.kind == "kernel"]

    @property
    def star(self):
        s = {self.origin}
        for e in self.edges:
            if e.kind == "test":
                s.add(e.head if e.tail == self.origin else e.tail)
        return s

    def edge(self, name):
        for e in self.edges:
            if e.name == name:
                return e
        raise KeyError(name)

    def total_a(self):
        return sum((e.a for e in self.kernels), Lin())

    def __str__(self):
        return format_graph(self)


@dataclass
class Verdict:
    passed: bool
    violations: list
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {"passed": self.passed,
                "violations": [{"condition": c, "subset": sorted(s), "lhs": str(l), "rhs": str(r)}
                               for c, s, l, r in self.violations],
                "notes": list(self.notes)}


def _subsets(items, min_size=1):
    items = list(items)
    for n in range(min_size, len(items) + 1):
        for c in combinations(items, n):
            yield frozenset(c)


def _classify(G, S):
    e0, up, down, touch = [], [], [], []
    for e in G.kernels:
        t, h = e.tail in S, e.head in S
        if t or h:
            touch.append(e)
        if t and h:
            e0.append(e)
        elif t and e.r > 0:
            up.append(e)
        elif h and e.r > 0:
            down.append(e)
    return e0, up, down, touch


def _sum(es, f):
    return sum((f(e) for e in es), Lin())


def condition4_lhs(G, S, variant="hq15"):
    e0, up, down, touch = _classify(G, S)
    downset = set(map(id, down))
    base = _sum([e for e in touch if id(e) not in downset], lambda e: e.a)
    if variant == "hq15":
        return base + _sum(up, lambda e: Lin(e.r)) - _sum(down, lambda e: Lin(e.r - 1)), Lin(DIM * len(S))
    if variant == "printed":
        return base + Lin(len(up)) - _sum(down, lambda e: Lin(e.r - 1)), Lin(DIM * len(G.vertices))
    if variant == "outgoing_a":
        return base + _sum(up, lambda e: e.a + (e.r - 1)) - _sum(down, lambda e: Lin(e.r - 1)), Lin(DIM * len(S))
    raise ValueError(variant)


def check_assumption(G, cond4="hq15", cond3="subset", order="delta_first", compare_cond4=True):
    """Check the four power-counting conditions.

    cond4 selects the large-scale condition: "hq15" (summand r_e on outgoing
    renormalised edges, bound 5|S|), "printed" or "outgoing_a".  cond3
    "subset" sums internal edges of S, "verbatim" of the whole vertex set.
    """
    viol = []
    o = G.origin
    for e in G.kernels:
        lhs = e.a + min(e.r, 0)
        if not lhs.lt(DIM, order):
            viol.append((1, frozenset({e.tail, e.head}), lhs, Lin(DIM)))
    for S in _subsets(G.vertices, 3):
        e0, _, _, _ = _classify(G, S)
        lhs, rhs = _sum(e0, lambda e: e.a), Lin(DIM * (len(S) - 1))
        if not lhs.lt(rhs, order):
            viol.append((2, S, lhs, rhs))
    rest = [v for v in G.vertices if v != o]
    all_e0 = _sum(G.kernels, lambda e: e.a)
    for T in _subsets(rest, 1):
        S = T | {o}
        e0, up, down, _ = _classify(G, S)
        lhs = (_sum(e0, lambda e: e.a) if cond3 == "subset" else all_e0) \
            + _sum(up, lambda e: e.a + (e.r - 1)) - _sum(down, lambda e: Lin(e.r))
        rhs = Lin(DIM * (len(S) - 1))
        if not lhs.lt(rhs, order):
            viol.append((3, S, lhs, rhs))
    free = [v for v in G.vertices if v not in G.star]
    notes = []
    for S in _subsets(free, 1):
        lhs, rhs = condition4_lhs(G, S, cond4)
        ok = lhs.gt(rhs, order)
        if not ok:
            viol.append((4, S, lhs, rhs))
        if compare_cond4:
            for other in ("hq15", "printed", "outgoing_a"):
                if other == cond4:
                    continue
                l2, r2 = condition4_lhs(G, S, other)
                if l2.gt(r2, order) != ok:
                    notes.append("condition 4 variant %s disagrees on %s" % (other, sorted(S)))
    return Verdict(not viol, viol, sorted(set(notes)))


def lambda_exponent(G, **kw):
    """(epsilon-exponent, lambda-exponent) of a graph passing the checks."""
    v = check_assumption(G, compare_cond4=False, **kw)
    if not v.passed:
        raise ValueError("graph fails the power-counting assumption: %s" % v.violations[0][:1])
    free = [x for x in G.vertices if x not in G.star]
    return G.prefactor, Lin(DIM * len(free)) - G.total_a()


def _with_edges(G, edges, **kw):
    return LabelledGraph(kw.get("vertices", G.vertices), edges, G.origin, kw.get("prefactor", G.prefactor))


def reduce_epsilon(G, assignment, allow_negative=False):
    """Move powers of epsilon from the prefactor onto eps-regularised edges.

    assignment maps edge names (or indices) to non-negative exponents.
    """
    assignment = {k: Lin.coerce(v) for k, v in assignment.items()}
    total = sum(assignment.values(), Lin())
    if not allow_negative and G.prefactor.lt(total):
        raise ValueError("assigned %s exceeds available epsilon power %s" % (total, G.prefactor))
    edges = list(G.edges)
    used = set()
    for i, e in enumerate(edges):
        key = e.name if e.name in assignment else (i if i in assignment else None)
        if key is None:
            continue
        s = assignment[key]
        if s.sign() < 0:
            raise ValueError("negative assignment %s" % s)
        if s.sign() and not e.eps:
            raise ValueError("edge %r is not epsilon-regularised" % (e.name or i))
        edges[i] = replace(e, a=e.a - s)
        used.add(key)
    missing = set(assignment) - used
    if missing:
        raise KeyError("unknown edges %s" % sorted(map(str, missing)))
    return _with_edges(G, edges, prefactor=G.prefactor - total)


def merge_edges(G, n1, n2, name=None):
    """Replace two parallel edges by one carrying the product kernel."""
    e1, e2 = G.edge(n1), G.edge(n2)
    if {e1.tail, e1.head} != {e2.tail, e2.head}:
        raise ValueError("edges are not parallel")
    if e1.r and e2.r:
        raise ValueError("cannot merge two renormalised edges")
    base = e1 if e1.r or not e2.r else e2
    new = replace(base, a=e1.a + e2.a, r=e1.r or e2.r, eps=e1.eps or e2.eps, name=name or base.name)
    edges = [new if e is e1 else e for e in G.edges if e is not e2]
    return _with_edges(G, edges)


def weaken_edge(G, name, s):
    """Raise an edge's degree; valid because kernels live in the unit ball."""
    s = Lin.coerce(s)
    if s.sign() < 0:
        raise ValueError("weakening must raise the degree")
    edges = [replace(e, a=e.a + s) if e.name == name else e for e in G.edges]
    return _with_edges(G, edges)


def drop_vertex(G, v):
    """Integrate out a non-star vertex joined by a single integrable edge."""
    if v in G.star:
        raise ValueError("cannot integrate out a star vertex")
    es = [e for e in G.edges if v in (e.tail, e.head)]
    if len(es) != 1 or not es[0].a.lt(DIM):
        raise ValueError("vertex %s is not an integrable leaf" % v)
    edges = [e for e in G.edges if e is not es[0]]
    return _with_edges(G, edges, vertices=[x for x in G.vertices if x != v])


# ---------------------------------------------------------------- text format

def format_graph(G):
    out = []
    star = G.star
    for v in G.vertices:
        flag = " origin" if v == G.origin else (" star" if v in star else "")
        out.append("vertex %s%s;" % (v, flag))
    for e in G.edges:
        if e.kind == "test":
            other = e.head if e.tail == G.origin else e.tail
            out.append("test %s;" % other)
            continue
        s = "edge %s -> %s a=%s r=%d" % (e.tail, e.head, e.a, e.r)
        if e.eps:
            s += " eps"
        if e.name:
            s += " id=%s" % e.name
        out.append(s + ";")
    if G.prefactor != Lin():
        out.append("prefactor %s;" % G.prefactor)
    return " ".join(out)


_EDGE = re.compile(r"edge\s+(\S+)\s*->\s*(\S+)\s+a=(\S+)\s+r=(-?\d+)((?:\s+eps)?)((?:\s+id=\S+)?)$")


def parse_graph(text):
    vertices, edges, origin, pref, stars = [], [], None, Lin(), set()
    for stmt in (s.strip() for s in text.split(";")):
        if not stmt:
            continue
        words = stmt.split()
        if words[0] == "vertex":
            vertices.append(words[1])
            for f in words[2:]:
                if f == "origin":
                    origin = words[1]
                elif f == "star":
                    stars.add(words[1])
                else:
                    raise ValueError("unknown vertex flag %r" % f)
        elif words[0] == "edge":
            m = _EDGE.match(stmt)
            if m is None:
                raise ValueError("bad edge statement %r" % stmt)
            t, h, a, r, ep, nm = m.groups()
            edges.append(Edge(t, h, Lin.parse(a), int(r), bool(ep.strip()), "kernel",
                              nm.strip()[3:] if nm.strip() else ""))
        elif words[0] == "test":
            edges.append(("test", words[1]))
        elif words[0] == "prefactor":
            pref = Lin.parse("".join(words[1:]))
        else:
            raise ValueError("unknown statement %r" % stmt)
    if origin is None:
        raise ValueError("no origin vertex")
    edges = [Edge(origin, e[1], kind="test") if isinstance(e, tuple) else e for e in edges]
    G = LabelledGraph(vertices, edges, origin, pref)
    if stars and stars != G.star - {origin}:
        raise ValueError("star flags %s do not match test legs %s" % (sorted(stars), sorted(G.star - {origin})))
    return G


# ---------------------------------------------------------------- chaos components

@dataclass
class ChaosComponent:
    """One homogeneous-chaos piece of E^a(Psi^k I(E^b Psi^n)) tested at 0.

    ``ell`` cross contractions, ``p``/``q`` self-contractions at the outer
    and inner vertex (canonical model only).  ``two_a``/``two_b`` double the
    epsilon powers; ``n is None`` marks a pure power E^a Psi^k.
    """
    order: int
    prefactor: int
    k: int
    n: object
    ell: int
    two_a: int
    two_b: int
    p: int = 0
    q: int = 0

    @property
    def eps_power(self):
        return Fraction(self.two_a + self.two_b, 2)

    @property
    def graph(self):
        return mean_graph(self, renormalised=False)


def _decompose(tau):
    two_a, body = (tau.data, tau.args[0]) if tau.kind == "e" else (0, tau)
    fs = body.factors
    k = sum(1 for f in fs if f == PSI)
    rest = [f for f in fs if f != PSI]
    if not rest:
        return two_a, k, None, 0
    if len(rest) != 1 or rest[0].kind != "i":
        raise ValueError("unsupported pattern %s" % tau)
    inner = rest[0].args[0]
    two_b, ib = (inner.data, inner.args[0]) if inner.kind == "e" else (0, inner)
    ifs = ib.factors
    if any(f != PSI for f in ifs) or not ifs:
        raise ValueError("unsupported pattern %s" % tau)
    return two_a, k, len(ifs), two_b


def chaos_components(tau, model="wick"):
    """Wiener-chaos pieces of tau.

    model="wick": ell = 0..min(k,n) with weight ell! C(k,ell) C(n,ell).
    model="canonical": also self-contractions inside each Psi-power.
    """
    two_a, k, n, two_b = _decompose(tau)
    out = []
    if n is None:
        for p in range(0, k // 2 + 1 if model == "canonical" else 1):
            w = comb(k, 2 * p) * double_factorial(2 * p - 1)
            out.append(ChaosComponent(k - 2 * p, w, k, None, 0, two_a, 0, p, 0))
        return out
    ps = range(0, k // 2 + 1) if model == "canonical" else [0]
    qs = range(0, n // 2 + 1) if model == "canonical" else [0]
    for q in qs:
        for p in ps:
            kk, nn = k - 2 * p, n - 2 * q
            for ell in range(0, min(kk, nn) + 1):
                w = comb(k, 2 * p) * double_factorial(2 * p - 1) * comb(n, 2 * q) \
                    * double_factorial(2 * q - 1) * factorial(ell) * comb(kk, ell) * comb(nn, ell)
                out.append(ChaosComponent(kk + nn - 2 * ell, w, k, n, ell, two_a, two_b, p, q))
    out.sort(key=lambda c: (-c.order, c.q, c.p, c.ell))
    return out


def _one_copy(c, s, renormalised):
    """Edges of a single copy; vertices u (inner), w (outer, tested)."""
    u, w = "u" + s, "w" + s
    es = []
    if c.n is None:
        return [w], es
    if renormalised:
        es.append(Edge(u, "0", Lin(3), 0, False, "kernel", "u0" + s))
    else:
        es.append(Edge(u, w, Lin(3), 1, False, "kernel", "uw" + s))
    if c.ell:
        es.append(Edge(u, w, Lin(c.ell), 0, True, "kernel", "ctr" + s))
    return [u, w], es


def _check_renormalisable(c):
    if c.n is None or c.p or c.q or c.ell != min(c.k, c.n) or abs(c.k - c.n) > 1:
        raise ValueError("component carries no mass counterterm")


def second_moment_graph(c, renormalised=False):
    """Mirror the kernel diagram and pair the leftover leaves across it."""
    if renormalised:
        _check_renormalisable(c)
    if c.p or c.q:
        raise ValueError("self-contracted components are removed by Wick ordering")
    v1, e1 = _one_copy(c, "", renormalised)
    v2, e2 = _one_copy(c, "'", renormalised)
    edges = e1 + e2
    if c.n is not None and c.n - c.ell:
        edges.append(Edge("u", "u'", Lin(c.n - c.ell), 0, True, "kernel", "uu"))
    if c.k - c.ell:
        edges.append(Edge("w", "w'", Lin(c.k - c.ell), 0, True, "kernel", "ww"))
    edges += [Edge("0", "w", kind="test"), Edge("0", "w'", kind="test")]
    return LabelledGraph(["0"] + v1 + v2, edges, "0", Lin(c.two_a + c.two_b))


def renormalised_graphs(c):
    """Second-moment graphs of a mass-renormalised component.

    The counterterm turns the barred kernel into K(-z_u).  When the leftover
    leaf sits on the inner vertex (n = k + 1) the subtraction also leaves the
    renormalised distribution R(K G^ell) between u and w, a second graph.
    """
    _check_renormalisable(c)
    out = []
    if c.n == c.k + 1:
        edges = [Edge("u", "w", Lin(c.ell + 3), -1, True, "kernel", "R"),
                 Edge("u'", "w'", Lin(c.ell + 3), -1, True, "kernel", "R'"),
                 Edge("u", "u'", Lin(1), 0, True, "kernel", "uu"),
                 Edge("0", "w", kind="test"), Edge("0", "w'", kind="test")]
        out.append(LabelledGraph(["0", "u", "w", "u'", "w'"], edges, "0", Lin(c.two_a + c.two_b)))
    out.append(second_moment_graph(c, renormalised=True))
    return out


def mean_graph(c, renormalised=True):
    """First-moment diagram of a zeroth-chaos component."""
    if c.order != 0:
        raise ValueError("only zeroth-chaos components have a deterministic mean")
    if renormalised:
        _check_renormalisable(c)
    vs, es = _one_copy(c, "", renormalised)
    es.append(Edge("0", "w", kind="test"))
    return LabelledGraph(["0"] + vs, es, "0", Lin(Fraction(c.two_a + c.two_b, 2)))
