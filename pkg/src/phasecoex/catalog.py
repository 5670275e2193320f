"""Stored epsilon-power reductions for the negative-homogeneity symbols.

Each entry builds a raw graph (from the chaos decomposition where
possible), applies a fixed list of steps and records the resulting
(epsilon, lambda) exponent pair together with the target it must beat.
``bound_symbol`` covers a whole symbol set by solving for the assignment
with a small linear program.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from .graphs import (DIM, ZETA, Lin, LabelledGraph, _classify, _subsets, chaos_components,
                     check_assumption, drop_vertex, lambda_exponent, mean_graph, merge_edges,
                     parse_graph, reduce_epsilon, renormalised_graphs, second_moment_graph,
                     weaken_edge)
from .symbols import homogeneity, parabolic_degree, parse
from .wick import mass_pattern

__all__ = ["CatalogEntry", "CATALOG", "run_entry", "search_reduction", "bound_symbol", "hom_lin", "MERGED",
           "apply_steps"]

D = Lin(0, 1)


def hom_lin(tau):
    h = homogeneity(tau)
    return Lin(h.q, 0, h.nk)


def _component(tau, ell):
    for c in chaos_components(parse(tau)):
        if c.ell == ell:
            return c
    raise KeyError(ell)


@dataclass
class CatalogEntry:
    name: str
    tau: str
    build: object
    steps: list
    expected: tuple
    printed: tuple = None
    moment: int = 2
    allow_negative: bool = False
    target: object = None
    note: str = ""

    def target_exponent(self):
        if self.target is not None:
            return Lin.coerce(self.target)
        return hom_lin(parse(self.tau)) * self.moment


def apply_steps(G, steps, allow_negative=False):
    for st in steps:
        op, args = st[0], st[1:]
        if op == "reduce":
            G = reduce_epsilon(G, args[0], allow_negative=allow_negative)
        elif op == "merge":
            G = merge_edges(G, *args)
        elif op == "weaken":
            G = weaken_edge(G, *args)
        elif op == "drop":
            G = drop_vertex(G, args[0])
        else:
            raise ValueError(op)
    return G


def run_entry(e, cond4="hq15"):
    """Returns (reduced graph, verdict, exponent pair or None, beats target)."""
    G = apply_steps(e.build(), e.steps, e.allow_negative)
    v = check_assumption(G, cond4=cond4)
    if not v.passed:
        return G, v, None, False
    pair = lambda_exponent(G, cond4=cond4)
    return G, v, pair, pair[1].gt(e.target_exponent(), "kappa_first")


def _knl(tau, ell):
    return lambda: second_moment_graph(_component(tau, ell))


def _knl_l2_steps(k, n, ell):
    s = Lin(ell - 2) + D
    return [("reduce", {"ctr": s, "ctr'": s}), ("merge", "uw", "ctr"), ("merge", "uw'", "ctr'")]


_POSITIVE = """vertex 0 origin; vertex u; vertex w star; vertex u'; vertex w' star;
edge u -> w a=3 r=2 id=uw; edge u' -> w' a=3 r=2 id=uw'; edge u -> u' a=3 r=0 eps id=uu;
test w; test w'; prefactor 0;"""

# positive-homogeneity entry, j = 1: tau = I(Psi^3), |tau| = 1/2 - 3k
_POS_ASSIGN = Lin(Fraction(7, 5), 0, 6)

CATALOG = [
    CatalogEntry("knl_l0", "E^{1/2}(I(Xi)I(Xi)I(Xi)I(I(Xi)I(Xi)I(Xi)))", _knl("E^{1/2}(I(Xi)I(Xi)I(Xi)I(I(Xi)I(Xi)I(Xi)))", 0),
                 [("reduce", {"uu": 0, "ww": Lin(1) - D})], (D, Lin(-1) - D)),
    CatalogEntry("knl_l1", "E^{1/2}(I(Xi)I(Xi)I(Xi)I(I(Xi)I(Xi)I(Xi)))", _knl("E^{1/2}(I(Xi)I(Xi)I(Xi)I(I(Xi)I(Xi)I(Xi)))", 1),
                 [("reduce", {"uu": 0, "ww": Lin(1) - D})], (D, Lin(-1) - D),
                 note="contraction edge kept apart from the barred kernel"),
    CatalogEntry("knl_l2", "E^{3/2}(I(Xi)I(Xi)I(Xi)I(Xi)I(Xi)I(I(Xi)I(Xi)I(Xi)))",
                 _knl("E^{3/2}(I(Xi)I(Xi)I(Xi)I(Xi)I(Xi)I(I(Xi)I(Xi)I(Xi)))", 3),
                 _knl_l2_steps(5, 3, 3) + [("reduce", {"ww": Lin(1) - 3 * D}), ("drop", "u"), ("drop", "u'")],
                 (D, Lin(-1) - 3 * D), note="ell = n; leaves u, u' integrated out"),
    CatalogEntry("knl_l2_n1", "E^{2/2}(I(Xi)I(Xi)I(Xi)I(Xi)I(I(Xi)I(Xi)I(Xi)))",
                 _knl("E^{2/2}(I(Xi)I(Xi)I(Xi)I(Xi)I(I(Xi)I(Xi)I(Xi)))", 2),
                 [("reduce", {"ctr": D, "ctr'": D, "ww": Lin(2) - 3 * D})],
                 (D, Lin(-1) - D), note="ell = n - 1"),
    CatalogEntry("knl_l2_more", "I(Xi)I(Xi)I(E^{1/2}(I(Xi)I(Xi)I(Xi)I(Xi)))",
                 _knl("I(Xi)I(Xi)I(E^{1/2}(I(Xi)I(Xi)I(Xi)I(Xi)))", 2),
                 [("reduce", {"ctr": D, "ctr'": D, "uu": 0}), ("reduce", {"ctr": Lin(1) - 3 * D})],
                 (D, Lin(-1) - D)),
    CatalogEntry("bound_0", "E^{1/2}(I(Xi)I(Xi)I(Xi)I(E^{1/2}(I(Xi)I(Xi)I(Xi))))",
                 lambda: mean_graph(_component("E^{1/2}(I(Xi)I(Xi)I(Xi)I(E^{1/2}(I(Xi)I(Xi)I(Xi))))", 3)),
                 [("reduce", {"ctr": Lin(1) - D})], (D, -D), moment=1),
    CatalogEntry("bound_0_prime", "E^{1/2}(I(Xi)I(Xi)I(Xi)I(I(Xi)I(Xi)I(Xi)))",
                 lambda: mean_graph(_component("E^{1/2}(I(Xi)I(Xi)I(Xi)I(I(Xi)I(Xi)I(Xi)))", 3)),
                 [("reduce", {"ctr": Lin(Fraction(1, 2)) - D})], (D, Lin(Fraction(-1, 2)) - D), moment=1),
    CatalogEntry("bound_1_renorm", "E^{2/2}(I(Xi)I(Xi)I(Xi)I(Xi)I(I(Xi)I(Xi)I(Xi)))",
                 lambda: second_moment_graph(_component("E^{2/2}(I(Xi)I(Xi)I(Xi)I(Xi)I(I(Xi)I(Xi)I(Xi)))", 3), True),
                 [("reduce", {"ctr": Lin(1) - D, "ctr'": Lin(1) - D})], (2 * D, Lin(-1) - 2 * D)),
    CatalogEntry("bound_1_good", "E^{2/2}(I(Xi)I(Xi)I(Xi)I(Xi)I(E^{1/2}(I(Xi)I(Xi)I(Xi))))",
                 _knl("E^{2/2}(I(Xi)I(Xi)I(Xi)I(Xi)I(E^{1/2}(I(Xi)I(Xi)I(Xi))))", 3),
                 [("reduce", {"ctr": Lin(1) + D, "ctr'": Lin(1) + D, "ww": Lin(1) - 3 * D})],
                 (D, -D), printed=(D, -3 * D), note="printed lambda power is weaker than the graph gives"),
    CatalogEntry("bound_21_renorm", "E^{1/2}(I(Xi)I(Xi)I(Xi)I(E^{1/2}(I(Xi)I(Xi)I(Xi)I(Xi))))",
                 lambda: renormalised_graphs(_component("E^{1/2}(I(Xi)I(Xi)I(Xi)I(E^{1/2}(I(Xi)I(Xi)I(Xi)I(Xi))))", 3))[0],
                 [("reduce", {"R": Lin(1) - D, "R'": Lin(1) - D})], (2 * D, Lin(-1) - 2 * D)),
    CatalogEntry("bound_22_renorm", "E^{1/2}(I(Xi)I(Xi)I(Xi)I(E^{1/2}(I(Xi)I(Xi)I(Xi)I(Xi))))",
                 lambda: renormalised_graphs(_component("E^{1/2}(I(Xi)I(Xi)I(Xi)I(E^{1/2}(I(Xi)I(Xi)I(Xi)I(Xi))))", 3))[1],
                 [("reduce", {"ctr": Lin(1) - D, "ctr'": Lin(1) - D})], (2 * D, Lin(-1) - 2 * D),
                 note="prefactor is eps^(2n-4); the printed eps^(n-2) drops the doubling"),
    CatalogEntry("bound_2_good", "E^{1/2}(I(Xi)I(Xi)I(Xi)I(E^{2/2}(I(Xi)I(Xi)I(Xi)I(Xi))))",
                 _knl("E^{1/2}(I(Xi)I(Xi)I(Xi)I(E^{2/2}(I(Xi)I(Xi)I(Xi)I(Xi))))", 3),
                 [("reduce", {"ctr": Lin(1) + D, "ctr'": Lin(1) + D, "uu": Lin(1) - 3 * D})], (D, -D)),
    CatalogEntry("bound_positive", "I(I(Xi)I(Xi)I(Xi))", lambda: parse_graph(_POSITIVE),
                 [("reduce", {"uu": _POS_ASSIGN})], (-_POS_ASSIGN, Lin(Fraction(12, 5), 0, 6)),
                 allow_negative=True, target=2 * ZETA,
                 note="lambda < eps regime; compared against 2 zeta"),
    CatalogEntry("first_order", "E^{1/2}(I(Xi)I(Xi)I(Xi)I(Xi))",
                 _knl("E^{1/2}(I(Xi)I(Xi)I(Xi)I(Xi))", 0),
                 [("reduce", {"ww": Lin(1) - D})], (D, Lin(-3) - D)),
]


# the merged drawings: the l-bundle folded into the barred kernel
MERGED = {
    "knl_l1": lambda: apply_steps(_knl("E^{1/2}(I(Xi)I(Xi)I(Xi)I(I(Xi)I(Xi)I(Xi)))", 1)(),
                                  [("reduce", {"ww": Lin(1) - D}), ("merge", "uw", "ctr"), ("merge", "uw'", "ctr'")]),
    "knl_l2_n1": lambda: apply_steps(_knl("E^{2/2}(I(Xi)I(Xi)I(Xi)I(Xi)I(I(Xi)I(Xi)I(Xi)))", 2)(),
                                     _knl_l2_steps(4, 3, 2) + [("reduce", {"ww": Lin(2) - 3 * D})]),
    "knl_l2_more": lambda: apply_steps(_knl("I(Xi)I(Xi)I(E^{1/2}(I(Xi)I(Xi)I(Xi)I(Xi)))", 2)(),
                                       _knl_l2_steps(2, 4, 2) + [("reduce", {"uw": Lin(1) - 3 * D})]),
}


def _lp_rows(G, free_edges, cond4="hq15"):
    """Linear constraints A s + t*b <= c on reductions s and margin t."""
    idx = {id(e): i for i, e in enumerate(free_edges)}
    n = len(free_edges)
    rows, rhs = [], []

    def add(coef_edges, sign_t, const, bound):
        # sum_{e} coef*(a_e - s_e) + const + sign_t*t <= bound
        row = np.zeros(n + 1)
        val = const
        for e, c in coef_edges:
            val += c * float(e.a.q)
            if id(e) in idx:
                row[idx[id(e)]] -= c
        row[n] = sign_t
        rows.append(row)
        rhs.append(bound - val)

    o = G.origin
    for e in G.kernels:
        add([(e, 1)], 1, min(e.r, 0), DIM)
    for S in _subsets(G.vertices, 3):
        e0, _, _, _ = _classify(G, S)
        add([(e, 1) for e in e0], 1, 0, DIM * (len(S) - 1))
    rest = [v for v in G.vertices if v != o]
    for T in _subsets(rest, 1):
        S = T | {o}
        e0, up, down, _ = _classify(G, S)
        add([(e, 1) for e in e0 + up], 1, sum(e.r - 1 for e in up) - sum(e.r for e in down), DIM * (len(S) - 1))
    free = [v for v in G.vertices if v not in G.star]
    for S in _subsets(free, 1):
        e0, up, down, touch = _classify(G, S)
        dn = set(map(id, down))
        base = [e for e in touch if id(e) not in dn]
        if cond4 != "hq15":
            raise ValueError("search supports the hq15 form only")
        const = sum(e.r for e in up) - sum(e.r - 1 for e in down)
        # lhs - t >= 5|S|  <=>  -lhs + t <= -5|S|
        add([(e, -1) for e in base], 1, -const, -DIM * len(S))
    return np.array(rows), np.array(rhs)


def search_reduction(G, total=None):
    """Spread ``total`` (default: the whole prefactor minus delta) over the
    epsilon-regularised edges so the graph passes with a positive margin.

    Best effort: the LP runs on the rational parts, the answer is rounded
    to small denominators and re-verified exactly.  Returns the reduced
    graph or None.
    """
    total = G.prefactor if total is None else Lin.coerce(total)
    if total.q <= 0:
        return G if check_assumption(G, compare_cond4=False).passed else None
    free_edges = [e for e in G.kernels if e.eps]
    if not free_edges:
        return None
    n = len(free_edges)
    A, b = _lp_rows(G, free_edges)
    A_eq = np.zeros((1, n + 1))
    A_eq[0, :n] = 1
    bounds = [(0, float(e.a.q)) for e in free_edges] + [(None, 1)]
    c = np.zeros(n + 1)
    c[n] = -1
    res = linprog(c, A_ub=A, b_ub=b, A_eq=A_eq, b_eq=[float(total.q)], bounds=bounds, method="highs")
    if not res.success or res.x[n] <= 1e-9:
        return None
    s = [Fraction(x).limit_denominator(60) for x in res.x[:n]]
    j = int(np.argmax(res.x[:n]))
    s[j] += total.q - sum(s)
    assign = {}
    for i, e in enumerate(free_edges):
        v = Lin(s[i])
        if i == j:
            v = v - D + Lin(0, total.d, total.k)
        if v != Lin():
            assign[e.name] = v
    try:
        R = reduce_epsilon(G, assign)
    except ValueError:
        return None
    return R if check_assumption(R, compare_cond4=False).passed else None


@dataclass
class SymbolBound:
    tau: str
    component: str
    graph: object
    pair: tuple
    target: Lin
    ok: bool


def bound_symbol(tau):
    """Bound every Wick-chaos component of a symbol with an E factor.

    Each component's graph gets the whole epsilon power but delta; its
    lambda exponent must beat 2|tau| (|tau| for deterministic means).
    """
    h = hom_lin(tau)
    hit = mass_pattern(tau)
    out = []
    for c in chaos_components(tau):
        label = "order=%d ell=%d" % (c.order, c.ell)
        renorm = hit is not None and c.n is not None and c.ell == min(c.k, c.n) and c.order == abs(c.k - c.n)
        if c.order == 0:
            graphs, target = [mean_graph(c, renormalised=renorm)], h
        elif renorm:
            graphs, target = renormalised_graphs(c), 2 * h
        else:
            graphs, target = [second_moment_graph(c)], 2 * h
        for G in graphs:
            R = search_reduction(G)
            if R is None:
                out.append(SymbolBound(str(tau), label, G, None, target, False))
                continue
            pair = lambda_exponent(R)
            out.append(SymbolBound(str(tau), label, R, pair, target, pair[1].gt(target, "kappa_first")))
    return out
