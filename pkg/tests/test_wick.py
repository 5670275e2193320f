from fractions import Fraction as F
from math import comb, factorial

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from phasecoex.symbols import ONE, PSI, XI, eps, generate_basis, integ, mul, poly, psi_pow
from phasecoex.wick import (
    LinComb, ThetaSeries, double_factorial, effective_coefficients, gaussian_smooth, hermite,
    hermite_eval, hermite_rewrite, m0_map, mass_pattern, peval, pmul, shift_expand, taylor_shift,
    wick_map,
)

C = sympy.Symbol("C")
C1 = sympy.Symbol("C1")
theta = sympy.Symbol("theta")
fracs = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def hermite_closed(k, c):
    out = [0] * (k + 1)
    for m in range(k // 2 + 1):
        out[k - 2 * m] = (-1) ** m * factorial(k) // (factorial(m) * factorial(k - 2 * m) * 2 ** m) * c ** m
    return out


@pytest.mark.parametrize("k", range(11))
def test_hermite_closed_form(k):
    got = [sympy.expand(x) for x in hermite(k, C)]
    assert got == [sympy.expand(x) for x in hermite_closed(k, C)]


@pytest.mark.parametrize("k", range(11))
def test_hermite_matches_numpy(k):
    # C^{k/2} He_k(x / sqrt C)
    x = np.linspace(-3, 3, 13)
    c = 1.7
    e = np.zeros(k + 1)
    e[k] = 1
    ref = c ** (k / 2) * np.polynomial.hermite_e.hermeval(x / np.sqrt(c), e)
    assert np.allclose(peval(hermite(k, c), x), ref, rtol=1e-12, atol=1e-9)
    assert np.allclose(hermite_eval(k, x, c), ref, rtol=1e-12, atol=1e-9)


def test_hermite_examples():
    assert hermite(0, C) == [1]
    assert [sympy.expand(x) for x in hermite(2, C)] == [-C, 0, 1]
    assert [sympy.expand(x) for x in hermite(3, C)] == [0, -3 * C, 0, 1]


def test_double_factorial():
    assert [double_factorial(n) for n in (-1, 0, 1, 3, 5, 7)] == [1, 1, 1, 3, 15, 105]


# ---------------------------------------------------------------- Wick map

def test_wick_examples():
    assert wick_map(psi_pow(3), C1) == LinComb({psi_pow(3): 1, PSI: -3 * C1})
    assert wick_map(XI, C1) == LinComb.of(XI)
    tau = mul(psi_pow(2), integ(psi_pow(3)))
    want = LinComb({tau: 1, integ(psi_pow(3)): -C1, mul(psi_pow(2), integ(PSI)): -3 * C1, integ(PSI): 3 * C1 ** 2})
    assert wick_map(tau, C1) == want


def test_wick_hermite_on_powers():
    for k in range(9):
        h = hermite(k, C1)
        want = LinComb({psi_pow(j): c for j, c in enumerate(h) if c != 0})
        assert wick_map(psi_pow(k), C1) == want


def _random_symbols(n, seed):
    S = generate_basis(6, 2)
    pool = sorted(S.members | S.extension, key=lambda s: s._key)
    rng = np.random.default_rng(seed)
    return [pool[i] for i in rng.choice(len(pool), n, replace=False)]


def test_wick_inverse_on_random_symbols():
    for tau in _random_symbols(200, 1):
        back = wick_map(wick_map(tau, C1), -C1)
        assert back == LinComb.of(tau)


def test_wick_preserves_homogeneity_of_leading_term():
    from phasecoex.symbols import homogeneity
    for tau in _random_symbols(50, 2):
        out = wick_map(tau, C1)
        assert out.coeff(tau) == 1
        for s, _ in out:
            # each contraction removes two Psi, i.e. raises |.| by 1 + 2 kappa
            d = homogeneity(s) - homogeneity(tau)
            assert 2 * d.q == d.nk and d.q >= 0 and d.q.denominator == 1


# ---------------------------------------------------------------- mass map

def test_m0_examples():
    C3, C3p = sympy.symbols("C3 C3'")
    t1 = eps(1, mul(psi_pow(3), integ(eps(1, psi_pow(3)))))
    assert m0_map(t1) == LinComb({t1: 1, ONE: -6 * C3})
    t2 = eps(1, mul(psi_pow(3), integ(psi_pow(3))))
    assert m0_map(t2) == LinComb({t2: 1, ONE: -6 * C3p})
    assert m0_map(psi_pow(3)) == LinComb.of(psi_pow(3))


def test_m0_families():
    C2 = sympy.Symbol("C2")
    t = mul(psi_pow(2), integ(psi_pow(2)))
    assert m0_map(t) == LinComb({t: 1, ONE: -2 * C2})
    t = mul(psi_pow(2), integ(psi_pow(3)))
    assert m0_map(t) == LinComb({t: 1, PSI: -6 * C2})
    # E^{(n-1)/2}(Psi^{n+1} I(E^{(n-3)/2} Psi^n)) at n = 3 gives (n+1)! Psi
    t = eps(2, mul(psi_pow(4), integ(psi_pow(3))))
    assert mass_pattern(t)[:3] == (24, PSI, 3)
    assert m0_map(t, {3: 2.0}) == LinComb({t: 1, PSI: -48.0})
    assert mass_pattern(mul(psi_pow(3), poly((0, 1, 0, 0)))) is None


# ---------------------------------------------------------------- smoothing

def test_gaussian_smooth_examples():
    v = sympy.Symbol("v")
    assert [sympy.expand(x) for x in gaussian_smooth([0, 0, 0, 1], v)] == [0, 3 * v, 0, 1]
    assert [sympy.expand(x) for x in gaussian_smooth([0, 0, 0, 0, 1], v)] == [3 * v ** 2, 0, 6 * v, 0, 1]
    assert gaussian_smooth([F(5)], F(3)) == [F(5)]
    with pytest.raises(ValueError):
        gaussian_smooth([1, 2], -1)


@given(st.lists(fracs, max_size=9), st.fractions(0, 3, max_denominator=7), st.fractions(0, 3, max_denominator=7))
def test_gaussian_smooth_semigroup(p, v1, v2):
    assert gaussian_smooth(gaussian_smooth(p, v1), v2) == gaussian_smooth(p, v1 + v2)


def test_gaussian_smooth_semigroup_batch():
    rng = np.random.default_rng(3)
    for _ in range(100):
        p = [F(int(a), int(b)) for a, b in zip(rng.integers(-9, 10, 9), rng.integers(1, 6, 9))][:rng.integers(1, 10)]
        v1, v2 = F(int(rng.integers(0, 7)), 3), F(int(rng.integers(0, 7)), 5)
        assert gaussian_smooth(gaussian_smooth(p, v1), v2) == gaussian_smooth(p, v1 + v2)


@given(st.lists(fracs, max_size=5), st.fractions(0, 3, max_denominator=7))
def test_smoothing_keeps_odd(half, v):
    p = []
    for c in half:
        p += [F(0), c]
    q = gaussian_smooth(p, v)
    assert all(c == 0 for c in q[0::2])


def test_smoothing_against_moments():
    # E (x + y)^k with Gaussian y, by Monte Carlo free moment identity
    for k in range(9):
        p = [0] * k + [1]
        q = gaussian_smooth(p, F(2))
        want = [comb(k, j) * (double_factorial(k - j - 1) * 2 ** ((k - j) // 2) if (k - j) % 2 == 0 else 0)
                for j in range(k + 1)]
        assert q == [F(w) for w in want]


# ---------------------------------------------------------------- shift and rewrite

def test_shift_pitchfork_example():
    a3, a1p, a0pp, h = sympy.symbols("a3 a1p a0pp h")
    co = [ThetaSeries(0, 0, a0pp), ThetaSeries(0, a1p, 0), ThetaSeries(0, 0, 0), ThetaSeries(a3, 0, 0)]
    co = [ThetaSeries(c.value, c.d1, c.d2) for c in co]
    out = shift_expand(co, h, 3, theta)
    assert sympy.expand(out[2]) == 3 * a3 * h
    assert sympy.expand(out[0] - (a3 * h ** 3 + a1p * theta * h + a0pp * theta ** 2 / 2)) == 0


def test_shift_zero_and_truncation():
    co = [ThetaSeries(F(i + 1), F(i), F(1)) for i in range(8)]
    out = shift_expand(co, 0, 7, theta)
    for j in range(8):
        assert sympy.expand(out[j] - co[j].expr(theta)) == 0
    tr = shift_expand(co, sympy.Symbol("h"), 7, theta, truncate=6)
    assert tr.remainder == [7 - j for j in range(8)]
    with pytest.raises(ValueError):
        shift_expand(co, 0, 5)


@given(st.lists(fracs, min_size=1, max_size=8), fracs, fracs)
def test_shift_composition(p, h1, h2):
    assert taylor_shift(taylor_shift(p, h1), h2) == taylor_shift(p, h1 + h2)
    co = [ThetaSeries(c, 0, 0) for c in p]
    once = shift_expand(co, h1 + h2)
    twice = shift_expand([ThetaSeries(x, 0, 0) for x in shift_expand(co, h1)], h2)
    assert [sympy.expand(a - b) for a, b in zip(once, twice)] == [0] * len(p)


def _rewrite_rhs(b, delta, C1v, u, sqrt):
    return sum(bj * sqrt ** j * peval(hermite(j, C1v), u) for j, bj in enumerate(b))


def test_hermite_rewrite_examples():
    assert hermite_rewrite([0, 1], F(1, 4), 0, F(3)) == [0, 1]
    b = hermite_rewrite([0, 0, 0, 1], F(1, 4), 0, F(3))
    assert b == [0, F(9, 4), 0, 1]       # b1 = 3 C1 delta


def test_hermite_rewrite_exact():
    rng = np.random.default_rng(5)
    for _ in range(100):
        V = [F(int(a), int(b)) for a, b in zip(rng.integers(-9, 10, 7), rng.integers(1, 9, 7))]
        s = F(int(rng.integers(1, 9)), int(rng.integers(1, 9)))
        delta, h, c = s * s, F(int(rng.integers(-5, 6)), 4), F(int(rng.integers(1, 20)), 3)
        b = hermite_rewrite(V, delta, h, c)
        # both sides as polynomials in u
        lhs = [0] * 7
        for j, v in enumerate(taylor_shift(V, h)):
            lhs[j] = v * s ** j
        rhs = [F(0)] * 7
        for j, bj in enumerate(b):
            for i, hc in enumerate(hermite(j, c)):
                rhs[i] += bj * s ** j * hc
        assert rhs == lhs


def test_hermite_rewrite_float():
    rng = np.random.default_rng(6)
    for _ in range(100):
        V = rng.normal(size=7)
        delta, h, c = rng.uniform(0.01, 1), rng.normal(), rng.uniform(0.5, 10)
        b = hermite_rewrite(V, delta, h, c)
        u = rng.normal(size=20) * 2
        lhs = peval(list(V), np.sqrt(delta) * u + h)
        rhs = _rewrite_rhs(b, delta, c, u, np.sqrt(delta))
        assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-12 * np.abs(lhs).max())
    with pytest.raises(ValueError):
        hermite_rewrite([1], 0, 0, 1)


def test_effective_coefficients():
    co = [ThetaSeries(F(0), F(-1), F(2)), ThetaSeries(F(1)), ThetaSeries(F(0)), ThetaSeries(F(1), F(1))]
    eff = effective_coefficients(co, F(1, 2))
    assert eff[1].value == 1 + F(3, 2)
    assert eff[1].d1 == F(3, 2)
    assert eff[0].d1 == -1 and eff[3].value == 1
