from fractions import Fraction as F
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from phasecoex.symbols import (
    ONE, PSI, XI, Hom, closure_pass, eps, generate_basis, homogeneity, integ, mul, parse,
    poly, psi_pow, render, tplus_generators,
)
from strategies import symbols

KAPPA = F(1, 1000)


# ---------------------------------------------------------------- oracle
# Independent re-enumeration on plain tuples, grown one factor per level.

def o_mul(*xs):
    facs, k = [], [0, 0, 0, 0]
    for x in xs:
        for f in (x[1] if x[0] == "P" else (x,)):
            if f[0] == "1":
                continue
            if f[0] == "X":
                k = [a + b for a, b in zip(k, f[1])]
            else:
                facs.append(f)
    if any(k):
        facs.append(("X", tuple(k)))
    if not facs:
        return ("1",)
    if len(facs) == 1:
        return facs[0]
    return ("P", tuple(sorted(facs, key=repr)))


@lru_cache(maxsize=None)
def o_hom(x):
    t = x[0]
    if t == "1":
        return F(0), 0
    if t == "Xi":
        return F(-5, 2), -1
    if t == "X":
        k = x[1]
        return F(2 * k[0] + k[1] + k[2] + k[3]), 0
    if t == "I":
        q, n = o_hom(x[1])
        return q + 2, n
    if t == "E":
        q, n = o_hom(x[2])
        return q + F(x[1], 2), n
    q, n = F(0), 0
    for f in x[1]:
        a, b = o_hom(f)
        q, n = q + a, n + b
    return q, n


def o_text(x):
    t = x[0]
    if t == "1":
        return "1"
    if t == "Xi":
        return "Xi"
    if t == "X":
        return "X^(%d,%d,%d,%d)" % x[1]
    if t == "I":
        return "I(%s)" % o_text(x[1])
    if t == "E":
        return "E^{%d/2}(%s)" % (x[1], o_text(x[2]))
    return "".join(o_text(f) for f in x[1])


def o_multisets(pool, nmax, cap, offset):
    # homogeneities are half-integers here, so work with 2q as ints
    qs = [int(2 * o_hom(p)[0]) for p in pool]
    cap2, off2 = int(2 * cap), int(2 * offset)
    low = min([0] + qs)
    level = [((), 0, 0)]
    out = [()]
    for size in range(1, nmax + 1):
        slack = (nmax - size) * low
        nxt = []
        for idx, first, tot in level:
            for i in range(first, len(pool)):
                t = tot + qs[i]
                if off2 + t + slack > cap2:
                    if qs[i] >= 0:
                        break
                    continue
                nxt.append((idx + (i,), i, t))
                if off2 + t <= cap2:
                    out.append(idx + (i,))
        level = nxt
    return [tuple(pool[i] for i in m) for m in out]


def oracle_basis(m, gamma):
    gamma = F(gamma)
    U = {("1",)}
    for d in range(1, int(gamma + 1) + 1):
        for k0 in range(d // 2 + 1):
            r = d - 2 * k0
            for k1 in range(r + 1):
                for k2 in range(r - k1 + 1):
                    U.add(("X", (k0, k1, k2, r - k1 - k2)))
    V = {("Xi",)}
    while True:
        pool = sorted((u for u in U if u != ("1",)), key=lambda u: (o_hom(u)[0], repr(u)))
        V2 = set(V)
        V2.update(o_mul(*t) for t in o_multisets(pool, 3, gamma, 0))
        for k in range(1, m - 2):
            for t in o_multisets(pool, k + 3, gamma, F(k, 2)):
                V2.add(("E", k, o_mul(*t)))
        V2 = {v for v in V2 if o_hom(v)[0] <= gamma}
        U2 = set(U)
        U2.update(("I", v) for v in V2 if v[0] not in ("1", "X") and o_hom(v)[0] + 2 <= gamma + 1)
        if U2 == U and V2 == V:
            break
        U, V = U2, V2

    def below(x):
        q, n = o_hom(x)
        return q < gamma or (q == gamma and n < 0)
    return {parse(o_text(x)) for x in U | V if below(x)}


# ---------------------------------------------------------------- basics

def test_mul_examples():
    assert mul(ONE, XI) == XI
    assert mul(PSI, PSI) == psi_pow(2)
    x1 = poly((0, 1, 0, 0))
    assert mul(mul(integ(mul(XI, x1)), XI), ONE) == mul(mul(XI, ONE), integ(mul(x1, XI)))
    assert poly((0, 0, 0, 0)) == ONE


def test_homogeneity_examples():
    assert homogeneity(XI) == Hom(F(-5, 2), -1)
    assert homogeneity(ONE) == Hom(0, 0)
    assert homogeneity(PSI) == Hom(F(-1, 2), -1)
    assert homogeneity(eps(1, psi_pow(4))) == Hom(F(-3, 2), -4)


def test_hom_order_is_kappa_limit():
    assert Hom(F(1, 2), 5) < Hom(F(1, 2) + F(1, 10**9), -100)
    assert Hom(0, -1) < Hom(0, 0)
    assert Hom(0, -1).value(KAPPA) == pytest.approx(-0.001)


@given(symbols)
def test_render_parse_roundtrip(s):
    assert parse(render(s)) == s
    assert render(parse(render(s))) == render(s)


@given(symbols, symbols, symbols)
def test_mul_commutative_associative(a, b, c):
    assert mul(a, b) == mul(b, a)
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert mul(a, ONE) == a


@given(symbols, symbols)
def test_homogeneity_additive(a, b):
    assert homogeneity(mul(a, b)) == homogeneity(a) + homogeneity(b)


@given(symbols)
def test_canonical_idempotent(s):
    assert mul(s) == s
    assert mul(*s.factors) == s


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse("I(Xi")
    with pytest.raises(ValueError):
        parse("Xi)")


# ---------------------------------------------------------------- generation

def test_kappa_validation():
    with pytest.raises(ValueError):
        generate_basis(4, 0, F(1, 32))
    with pytest.raises(ValueError):
        generate_basis(3, 0)
    generate_basis(4, 0, F(1, 33))


def test_empty_below_minus_three():
    assert len(generate_basis(4, -3, KAPPA)) == 0


def test_gamma0_contents():
    S = generate_basis(4, 0, KAPPA)
    for s in [XI, psi_pow(3), eps(1, psi_pow(4)), mul(PSI, integ(psi_pow(3)))]:
        assert s in S
    # Psi X_i has homogeneity 1/2 - kappa and sits above the cutoff
    assert mul(PSI, poly((0, 1, 0, 0))) not in S
    assert len(S) == 26


@pytest.mark.parametrize("m", [4, 5, 6])
def test_matches_oracle(m):
    S = generate_basis(m, 2, KAPPA)
    assert set(S.members) == oracle_basis(m, 2)
    assert all(homogeneity(s) < Hom(2) for s in S)


@pytest.mark.parametrize("m,gamma", [(4, 0), (4, 1), (5, F(3, 2))])
def test_oracle_other_cutoffs(m, gamma):
    assert set(generate_basis(m, gamma, KAPPA).members) == oracle_basis(m, gamma)


def test_closure_fixed_point():
    S = generate_basis(5, 2, KAPPA)
    # rebuild the uncut sets and check a further pass is a no-op
    from phasecoex.symbols import _initial
    U, V = _initial(2)
    while True:
        U2, V2 = closure_pass(U, V, 5, 2)
        if (U2, V2) == (U, V):
            break
        U, V = U2, V2
    assert closure_pass(U, V, 5, 2) == (U, V)
    assert S.members <= U | V


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([F(-2), F(-1), F(-1, 2), F(0), F(1, 2), F(1)]),
       st.sampled_from([F(1, 2), F(1), F(3, 2)]))
def test_monotone_in_gamma(g, d):
    assert generate_basis(4, g, KAPPA).members <= generate_basis(4, g + d, KAPPA).members


def test_tags_and_extension():
    S = generate_basis(4, 0, KAPPA)
    e = eps(1, psi_pow(4))
    assert "V" in S.tags[e] and "W" in S.tags[e]
    assert psi_pow(4) in S.extension
    assert S.tags[psi_pow(4)] == frozenset({"W_ex"})
    assert "U" in S.tags[PSI]


def test_tplus_examples():
    S = generate_basis(4, 2, KAPPA)
    gens = tplus_generators(S)
    f2 = {g.symbol: g for g in gens if g.family == "F2"}
    assert XI not in f2
    assert f2[psi_pow(3)].ells == ((0, 0, 0, 0),)
    f1 = [g for g in gens if g.family == "F1"]
    assert len(f1) == 4
    f3 = [g for g in gens if g.family == "F3" and g.symbol == psi_pow(4) and g.two_beta == 1]
    # beta + |Psi^4| = -3/2 - 4 kappa and |l| >= -2 - 4 kappa: no non-negative l fits
    assert f3 == []
    for g in gens:
        if g.family == "F3":
            inner = homogeneity(g.symbol)
            for l in g.ells:
                d = Hom(2 * l[0] + sum(l[1:]))
                assert not d < inner and d < inner + F(g.two_beta, 2)
