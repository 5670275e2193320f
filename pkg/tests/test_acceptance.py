"""Acceptance criteria 1-8, one PASS/FAIL line each (collected in the terminal summary)."""

from contextlib import contextmanager
from fractions import Fraction as F
import time

import numpy as np
import pytest

RESULTS = []


@contextmanager
def criterion(n, budget):
    t0 = time.perf_counter()
    info = {}
    try:
        yield info
    except BaseException as e:
        line = "criterion %d: FAIL (%.1fs) %s" % (n, time.perf_counter() - t0, str(e).splitlines()[0] if str(e) else type(e).__name__)
        RESULTS.append(line)
        print(line)
        raise
    dt = time.perf_counter() - t0
    ok = dt < budget
    line = "criterion %d: %s (%.1fs, budget %gs) %s" % (n, "PASS" if ok else "FAIL", dt, budget,
                                                      " ".join("%s=%s" % kv for kv in info.items()))
    RESULTS.append(line)
    print(line)
    assert ok, "runtime %.1fs over budget %gs" % (dt, budget)


def test_criterion_1_cubic():
    from phasecoex.classifier import cubic_roots, rho_star
    with criterion(1, 1.0):
        rs = rho_star(1, -1, 2)
        assert rs == pytest.approx(3, rel=1e-15)
        roots = cubic_roots(rs, 1, -1, 2)
        assert [m for _, m, _, _ in roots] == [2, 1]
        assert abs(roots[0][0] + 1) < 1e-12 and abs(roots[1][0] - 2) < 1e-12
        assert all(abs(r ** 3 - rs * r - 2) < 1e-12 for r, *_ in roots)
        assert roots[0][0] == -(2 / 2) ** (1 / 3)
        counts = [len(cubic_roots(r, 1, -1, 2)) for r in (rs - 1e-6, rs, rs + 1e-6)]
        assert counts == [1, 2, 3], counts


def test_criterion_2_algebra():
    from test_wick import _random_symbols, _rewrite_rhs, hermite_closed
    from phasecoex.wick import LinComb, gaussian_smooth, hermite, hermite_rewrite, peval, wick_map
    import sympy
    C, C1 = sympy.symbols("C C1")
    sample = _random_symbols(200, 1)      # input generation, not timed
    with criterion(2, 10.0) as info:
        for k in range(11):
            assert [sympy.expand(x) for x in hermite(k, C)] == [sympy.expand(x) for x in hermite_closed(k, C)]
        for tau in sample:
            assert wick_map(wick_map(tau, C1), -C1) == LinComb.of(tau)
        rng = np.random.default_rng(7)
        for _ in range(100):
            deg = int(rng.integers(0, 9))
            p = [F(int(a), int(b)) for a, b in zip(rng.integers(-9, 10, deg + 1), rng.integers(1, 8, deg + 1))]
            v1, v2 = F(int(rng.integers(0, 9)), int(rng.integers(1, 7))), F(int(rng.integers(0, 9)), int(rng.integers(1, 7)))
            assert gaussian_smooth(gaussian_smooth(p, v1), v2) == gaussian_smooth(p, v1 + v2)
        worst = 0.0
        for _ in range(100):
            V = rng.normal(size=7)
            delta, h, c = rng.uniform(0.01, 1), rng.normal(), rng.uniform(0.5, 10)
            b = hermite_rewrite(V, delta, h, c)
            u = rng.normal(size=20) * 2
            lhs = peval(list(V), np.sqrt(delta) * u + h)
            rhs = _rewrite_rhs(b, delta, c, u, np.sqrt(delta))
            worst = max(worst, np.abs(lhs - rhs).max() / np.abs(lhs).max())
        info["rewrite_rel"] = "%.1e" % worst
        assert worst < 1e-12


def test_criterion_3_symbols():
    from test_symbols import oracle_basis
    from phasecoex.symbols import _initial, closure_pass, generate_basis
    with criterion(3, 30.0) as info:
        for m in (4, 5, 6):
            S = generate_basis(m, 2, F(1, 1000))
            U, V = _initial(2)
            while True:
                U2, V2 = closure_pass(U, V, m, 2)
                if (U2, V2) == (U, V):
                    break
                U, V = U2, V2
            assert closure_pass(U, V, m, 2) == (U, V)
            assert set(S.members) == oracle_basis(m, 2)
            info["m%d" % m] = len(S)
        assert len(generate_basis(4, -3)) == 0


DISPLAYED = ["knl_l0", "knl_l1", "knl_l2", "knl_l2_more", "bound_0", "bound_1_renorm", "bound_1_good",
               "bound_21_renorm", "bound_22_renorm", "bound_2_good", "bound_positive"]


def test_criterion_4_catalog():
    from phasecoex.catalog import CATALOG, run_entry
    from phasecoex.graphs import Lin
    by = {e.name: e for e in CATALOG}
    with criterion(4, 5.0) as info:
        bad = []
        for name in DISPLAYED:
            e = by[name]
            _, v, pair, _ = run_entry(e)
            want = e.printed or e.expected
            if not v.passed or tuple(map(str, pair)) != tuple(map(str, want)):
                bad.append("%s: got %s, displayed %s" % (name, pair, want))
        _, _, pair, _ = run_entry(by["bound_positive"])
        assert pair[1].gt(Lin.coerce(F(12, 5)), "kappa_first")
        info["checked"] = len(DISPLAYED)
        assert not bad, "; ".join(bad)


def test_criterion_5_constants():
    from phasecoex.constants import c0_monte_carlo, default_kernels
    ker = default_kernels()
    grid = [2.0 ** -k for k in range(2, 8)]
    with criterion(5, 300.0) as info:
        mc, se = c0_monte_carlo(2_000_000, seed=1)
        e = grid[-1]
        rel = abs(e * ker.c1(e) - mc) / mc
        info["c1_rel"] = "%.4f" % rel
        c2 = [ker.cn(2, e) for e in grid]
        L = -np.log(grid)
        s1, s2 = np.polyfit(L[:3], c2[:3], 1)[0], np.polyfit(L[3:], c2[3:], 1)[0]
        drift = abs(s1 - s2) / abs(s2)
        info["c2_slope_drift"] = "%.3f" % drift
        c3 = [ker.cn(3, e) for e in grid + [grid[-1] / 2]]
        ratios = [abs(c3[i] - c3[i + 1]) / grid[i] for i in range(len(grid))]
        K = max(ratios)
        info["c3_K"] = "%.2e" % K
        cnp = max(abs(ker.cnp(n, e) * e ** 0.5 - ker.cn(n, e)) / abs(ker.cn(n, e)) for n in (3, 4) for e in grid)
        info["cnp_rel"] = "%.1e" % cnp
        assert rel < 0.02, "eps C1 off by %.4f" % rel
        assert np.isfinite(K) and all(r <= K * (1 + 1e-12) for r in ratios)
        assert cnp < 1e-14
        assert drift < 0.05, "C2 |log eps| slope differs by %.3f between grid halves" % drift


def test_criterion_6_golden():
    import golden
    table = golden.load()
    with criterion(6, 1.0) as info:
        bad = []
        for case in table["cases"]:
            miss, _ = golden.run_case(table, case)
            bad += miss
        info["cases"] = len(table["cases"])
        assert not bad, "; ".join(bad[:3])


def test_criterion_7_homogeneity():
    from phasecoex.classifier import phi3_coupling
    from phasecoex.constants import mass_constants
    rng = np.random.default_rng(11)
    Cn = {2: 0.3, 3: 0.02, 4: 0.01, 5: 0.004}
    Cnp = {3: 0.2, 4: 0.1, 5: 0.05}
    with criterion(7, 1.0):
        for t in rng.uniform(0.05, 20, 50):
            A, a3 = rng.uniform(0.1, 5), rng.uniform(0.1, 3)
            assert phi3_coupling(a3, t ** 3 * A) == pytest.approx(t * phi3_coupling(a3, A), rel=1e-12)
            lam = list(rng.normal(size=7))
            C, Cp = mass_constants(lam, Cn, Cnp, 6)
            Ct, Cpt = mass_constants([t * x for x in lam], Cn, Cnp, 6)
            assert Ct == pytest.approx(t * t * C, rel=1e-12) and Cpt == pytest.approx(t * t * Cp, rel=1e-12)


def test_criterion_8_simulator():
    from phasecoex.constants import lambda_weakly_nonlinear
    from phasecoex.sim import SimConfig, batch_se, micro_drift, ou_variance, renormalised_drift, simulate
    from phasecoex.wick import gaussian_smooth
    with criterion(8, 600.0) as info:
        for d, N in ((1, 256), (3, 16)):
            tr = simulate(SimConfig(d=d, N=N, dx=1.0, dt=0.05, T=400, seed=7, vprime=(0, 1.0)))
            m, se = batch_se(tr.second[tr.times >= 20])
            z = (m - ou_variance(d, N, 1.0, 1.0, dt=0.05)) / se
            info["z_d%d" % d] = "%.2f" % z
            assert abs(z) < 3
        V = [0.3, -1.0, 0.2, 1.0, 0.4, 0.1]
        Cn = {2: 0.7, 3: 0.11, 4: 0.05, 5: 0.02}
        u = np.random.default_rng(1).normal(size=50) * 3
        for delta, alpha, h in ((0.01, 1, 0.0), (0.003, 0.75, 0.2), (0.05, 2 / 3, -0.1)):
            lam = lambda_weakly_nonlinear(delta, alpha, 0, h, gaussian_smooth(V, delta * 2.3), Cn)
            got = renormalised_drift(u, lam, 2.3, 5, eps=delta, Cn=Cn,
                                     Cnp={k: v * delta ** -0.5 for k, v in Cn.items()})
            want = micro_drift(u, V, delta, alpha, h)
            assert np.abs(got - want).max() <= 1e-10 * np.abs(want).max()
        cfg = SimConfig(d=2, N=16, dt=0.02, T=2.0, seed=5, vprime=(0.1, -1.0, 0.0, 1.0))
        assert np.array_equal(simulate(cfg).final.values, simulate(cfg).final.values)
