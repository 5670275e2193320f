"""Kernels and renormalisation constants.

K = chi * P is the heat kernel on R^{1+3} cut off smoothly between parabolic
radius 1/2 and 1, rho a product bump, K_eps = K * rho_eps and G_eps the
covariance K_eps * K_eps.  Everything is radial in x, so integrals are done
in (t, |x|) with Gauss-Legendre panels.

Decomposition used throughout:

    G_eps(z) = eps^-1 H(t/eps^2, x/eps) - g(z) + O(eps^2)

with H = G^P * (rho * rho~) the mollified covariance of the untruncated
kernel (G^P(t, r) = erf(r / 2 sqrt|t|) / (8 pi r) in closed form) and
g = P*P - K*K the smooth truncation remainder, tabulated once.
"""

from dataclasses import asdict, dataclass, field
from functools import cached_property, lru_cache
from math import factorial
import hashlib
import json
import warnings

import numpy as np
from scipy.integrate import trapezoid
from scipy.interpolate import CubicSpline, RectBivariateSpline
from scipy.special import erf

__all__ = [
    "KernelSpec", "Kernels", "heat_kernel", "GP", "mass_constants", "compute_A",
    "compute_B", "lambda_weakly_nonlinear", "lambda_weak_noise", "ConstantsTable",
    "c0_monte_carlo", "c2_exact", "default_kernels", "shifted",
]

FOUR_PI = 4 * np.pi


def heat_kernel(t, r):
    t = np.asarray(t, float)
    r = np.asarray(r, float)
    tp = np.where(t > 0, t, 1.0)
    return np.where(t > 0, (FOUR_PI * tp) ** -1.5 * np.exp(-r ** 2 / (4 * tp)), 0.0)


def GP(t, r):
    """Covariance of the untruncated heat kernel, int P(z+w) P(w) dw."""
    a = 2 * np.sqrt(np.abs(np.asarray(t, float)))
    r = np.asarray(r, float)
    small = r < 1e-8 * np.maximum(a, 1e-300)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = erf(r / np.where(a > 0, a, 1e-300)) / (8 * np.pi * r)
        lim = 1.0 / (8 * np.pi ** 1.5 * np.where(a > 0, a / 2, np.inf))
    return np.where(small, lim, out)


def _bump(s):
    s = np.asarray(s, float)
    inside = np.abs(s) < 1
    with np.errstate(divide="ignore", over="ignore"):
        v = np.exp(-1.0 / np.where(inside, 1 - s ** 2, 1.0))
    return np.where(inside, v, 0.0)


def _psi(x):
    with np.errstate(divide="ignore", over="ignore"):
        return np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)


def _gl(n, a, b):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


def _gl_panels(edges, n):
    xs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        x, w = _gl(n, a, b)
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


@dataclass(frozen=True)
class KernelSpec:
    r_inner: float = 0.5
    r_outer: float = 1.0
    mollifier: str = "product-bump"
    nodes: int = 48

    def digest(self):
        return hashlib.sha256(json.dumps(asdict(self), sort_keys=True).encode()).hexdigest()[:16]


class Kernels:
    """Kernel evaluations for one KernelSpec."""

    def __init__(self, spec=KernelSpec()):
        self.spec = spec
        b = np.linspace(-1, 1, 4001)
        self._z1 = trapezoid(_bump(b), b)
        r = np.linspace(0, 1, 4001)
        self._z3 = trapezoid(FOUR_PI * r ** 2 * _bump(r), r)

    # -- cutoff and mollifier

    def norm(self, t, r):
        return (np.asarray(t, float) ** 2 + np.asarray(r, float) ** 4) ** 0.25

    def chi(self, nu):
        x = (np.asarray(nu, float) - self.spec.r_inner) / (self.spec.r_outer - self.spec.r_inner)
        a, b = _psi(1 - x), _psi(x)
        return a / (a + b)

    def rho1(self, t):
        return _bump(t) / self._z1

    def rho3(self, r):
        return _bump(r) / self._z3

    def rho(self, t, r):
        return self.rho1(t) * self.rho3(r)

    @cached_property
    def rho1_auto(self):
        """t -> int rho1(s) rho1(s + t) ds, as a spline on [-2, 2]."""
        s, w = _gl(200, -1, 1)
        t = np.linspace(-2, 2, 1601)
        vals = (self.rho1(s)[None, :] * self.rho1(s[None, :] + t[:, None]) * w).sum(1)
        return CubicSpline(t, vals)

    @cached_property
    def rho3_auto(self):
        """Radial profile of rho3 * rho3 on [0, 2]."""
        v = np.linspace(0, 1, 20001)
        cum = np.concatenate([[0], np.cumsum(0.5 * np.diff(v) * (v[1:] * self.rho3(v[1:]) + v[:-1] * self.rho3(v[:-1])))])
        Phi = CubicSpline(v, cum)
        Phi_of = lambda x: np.where(x >= 1, cum[-1], Phi(np.clip(x, 0, 1)))
        vv, wv = _gl(200, 0, 1)
        u = np.linspace(1e-6, 2, 1601)
        diff = Phi_of(u[:, None] + vv[None, :]) - Phi_of(np.abs(u[:, None] - vv[None, :]))
        vals = 2 * np.pi / u * (vv * self.rho3(vv) * wv * diff).sum(1)
        vals[-1] = 0.0
        return CubicSpline(u, vals)

    def _rt1(self, s):
        return np.where(np.abs(s) < 2, self.rho1_auto(np.clip(s, -2, 2)), 0.0)

    def _rt3(self, u):
        return np.where(u < 2, self.rho3_auto(np.clip(u, 1e-6, 2)), 0.0)

    # -- kernels

    def K(self, t, r):
        t = np.asarray(t, float)
        return self.chi(self.norm(t, r)) * heat_kernel(t, r)

    def Q(self, t, r):
        """(1 - chi) P, the smooth far part of the heat kernel."""
        return (1 - self.chi(self.norm(t, r))) * heat_kernel(t, r)

    def P_rho(self, T, R, n=None):
        """(P * rho)(T, R) for the unit mollifier."""
        n = n or self.spec.nodes
        T = np.atleast_1d(np.asarray(T, float))
        R = np.atleast_1d(np.asarray(R, float))
        s, ws = _gl(n, -1, 1)
        v, wv = _gl(n, 0, 1)
        tau = T[:, None, None] - s[None, :, None]

        def Pi(V):
            tp = np.where(tau > 0, tau, 1.0)
            return np.where(tau > 0, (FOUR_PI * tp) ** -1.5 * 2 * tp * (1 - np.exp(-V ** 2 / (4 * tp))), 0.0)

        Rb = np.maximum(R, 1e-7)[:, None, None]
        diff = (Pi(Rb + v[None, None, :]) - Pi(np.abs(Rb - v[None, None, :]))) / Rb
        w = (ws * self.rho1(s))[None, :, None] * (wv * v * self.rho3(v))[None, None, :]
        return 2 * np.pi * (diff * w).sum((1, 2))

    def H(self, T, R, n=None, chunk=128):
        """(G^P * rho~)(T, R) with rho~ = rho * rho(-.), by 2D quadrature."""
        n = n or self.spec.nodes
        T = np.atleast_1d(np.asarray(T, float)).ravel()
        R = np.atleast_1d(np.asarray(R, float)).ravel()
        out = np.empty(T.size)
        x, w = np.polynomial.legendre.leggauss(n)
        x = 0.5 * (x + 1)
        w = 0.5 * w
        for i in range(0, T.size, chunk):
            out[i:i + chunk] = self._H_chunk(T[i:i + chunk], R[i:i + chunk], x, w)
        return out

    def _H_chunk(self, T, R, x, w):
        c = np.clip(T, -2, 2)
        # s = c -+ w^2 removes the sqrt kink of G^P at tau = 0
        lo, hi = np.sqrt(c + 2), np.sqrt(2 - c)
        wl = lo[:, None] * x[None, :]
        wh = hi[:, None] * x[None, :]
        s = np.concatenate([c[:, None] - wl ** 2, c[:, None] + wh ** 2], 1)
        sw = np.concatenate([2 * wl * lo[:, None] * w, 2 * wh * hi[:, None] * w], 1)
        cu = np.clip(R, 0, 2)
        u = np.concatenate([cu[:, None] * x, cu[:, None] + (2 - cu)[:, None] * x], 1)
        uw = np.concatenate([cu[:, None] * w, (2 - cu)[:, None] * w], 1)
        tau = T[:, None, None] - s[:, :, None]
        a = 2 * np.sqrt(np.abs(tau))
        Rb = R[:, None, None]
        U = u[:, None, :]
        D = _F_diff(a, Rb, U)
        wt = (sw * self._rt1(s))[:, :, None] * (uw * u * self._rt3(u))[:, None, :]
        return 2 * np.pi * (D * wt).sum((1, 2))

    # -- truncation remainder g = P*P - K*K on t >= 0 (g is even in t)

    @cached_property
    def g_table(self):
        t = np.linspace(0, 1, 21)
        r = np.linspace(0, 1.1, 23)
        TT, RR = np.meshgrid(t, r, indexing="ij")
        vals = self.g_direct(TT.ravel(), RR.ravel()).reshape(TT.shape)
        return RectBivariateSpline(t, r, vals, kx=3, ky=3)

    def g(self, t, r):
        t = np.abs(np.asarray(t, float))
        r = np.asarray(r, float)
        return self.g_table.ev(np.clip(t, 0, 1), np.clip(r, 0, 1.1))

    def g_direct(self, t, r, n=32):
        t = np.atleast_1d(np.asarray(t, float))
        r = np.atleast_1d(np.asarray(r, float))
        sg, wsg = _gl(n, 0, 1)
        s, ws = sg ** 2, 2 * sg * wsg
        rho, wr = _gl(n, 0, 14)
        mu, wm = _gl(16, -1, 1)
        rad = FOUR_PI * rho ** 2 * (FOUR_PI) ** -1.5 * np.exp(-rho ** 2 / 4) * wr
        out = np.empty(t.size)
        for i, (ti, ri) in enumerate(zip(t, r)):
            S = s[:, None, None]
            P_ = rho[None, :, None]
            M = mu[None, None, :]
            # P(z+w) Q(w): Gaussian variable from P(t+s, .)
            ya = np.sqrt(np.maximum((ti + S) * P_ ** 2 + ri ** 2 - 2 * ri * np.sqrt(ti + S) * P_ * M, 0))
            A = self.Q(S + 0 * ya, ya)
            # Q(z+w) chi(w) P(w): Gaussian variable from P(s, .)
            yb = np.sqrt(np.maximum(ri ** 2 + S * P_ ** 2 + 2 * ri * np.sqrt(S) * P_ * M, 0))
            B = self.chi(self.norm(S, np.sqrt(S) * P_)) * self.Q(ti + S + 0 * yb, yb)
            wt = ws[:, None, None] * rad[None, :, None] * wm[None, None, :] / 2
            tail = GP(ti + 2, ri) / 2 if ri > 0 else GP(ti + 2, 0.0) / 2
            out[i] = ((A + B) * wt).sum() + tail
        return out

    # -- public evaluations

    def K_eps(self, t, r, eps):
        """K * rho_eps; the far part (1 - chi) P is left unmollified (O(eps^2))."""
        t = np.asarray(t, float)
        r = np.asarray(r, float)
        t, r = np.broadcast_arrays(t, r)
        return eps ** -3 * self.P_rho((t / eps ** 2).ravel(), (r / eps).ravel()).reshape(t.shape) - self.Q(t, r)

    def G_eps(self, t, r, eps):
        t = np.asarray(t, float)
        r = np.asarray(r, float)
        t, r = np.broadcast_arrays(t, r)
        return self.H(t / eps ** 2, r / eps).reshape(t.shape) / eps - self.g(t, r)

    @cached_property
    def H0(self):
        return float(self.H(0.0, 0.0)[0])

    def c0(self):
        return self.H0

    def c1(self, eps):
        """C_1 = G_eps(0) = int K_eps^2."""
        return self.H0 / eps - float(self.g(0.0, 0.0))

    # -- C_n in scaled coordinates t = eps^2 T, x = eps sqrt(T) eta

    @cached_property
    def _cn_nodes(self):
        tmax = np.log(2.0 ** 18)
        edges = np.concatenate([np.arange(np.log(1e-8), 0, 1.0), np.arange(0, tmax + 1e-9, 0.5)])
        tau, wt = _gl_panels(edges, 6)
        eta, we = _gl(40, 0, 14)
        T = np.exp(tau)
        TT = T[:, None] * np.ones_like(eta)[None, :]
        EE = np.ones_like(T)[:, None] * eta[None, :]
        Hv = self.H(TT.ravel(), (np.sqrt(TT) * EE).ravel()).reshape(TT.shape)
        base = (T * wt)[:, None] * (FOUR_PI * eta ** 2 * FOUR_PI ** -1.5 * np.exp(-eta ** 2 / 4) * we)[None, :]
        return TT, EE, Hv, base

    def cn(self, n, eps, with_g=True):
        """C_n = eps^(n-2) int K G_eps^n, n >= 2."""
        if n < 2:
            raise ValueError("C_n needs n >= 2")
        TT, EE, Hv, base = self._cn_nodes
        if eps ** -2 > TT.max():
            raise ValueError("eps below the tabulated range")
        t, r = eps ** 2 * TT, eps * np.sqrt(TT) * EE
        cut = self.chi(self.norm(t, r))
        G = Hv - (eps * self.g(t, r) if with_g else 0.0)
        return float((base * cut * G ** n).sum())

    def cnp(self, n, eps):
        if n < 3:
            raise ValueError("C_n' needs n >= 3")
        return eps ** -0.5 * self.cn(n, eps)


def _F_diff(a, R, U):
    """[F(R+U) - F(|R-U|)] / R with F(V) = int_0^V v G^P(tau, v) dv."""
    def F(V):
        safe = np.where(a > 0, a, 1.0)
        return np.where(a > 0, V * erf(V / safe) + safe / np.sqrt(np.pi) * (np.exp(-(V / safe) ** 2) - 1), V) / (8 * np.pi)

    Rs = np.maximum(R, 1e-300)
    big = (F(R + U) - F(np.abs(R - U))) / Rs
    safe = np.where(a > 0, a, 1.0)
    d1 = np.where(a > 0, erf(U / safe), 1.0) / (8 * np.pi)
    d3 = np.where(a > 0, -4 * U / (safe ** 3 * np.sqrt(np.pi)) * np.exp(-(U / safe) ** 2), 0.0) / (8 * np.pi)
    small = 2 * d1 + R ** 2 / 3 * d3
    return np.where(R < 1e-4, small, big)


@lru_cache(maxsize=4)
def default_kernels(spec=KernelSpec()):
    return Kernels(spec)


def c0_monte_carlo(n=2_000_000, seed=0, spec=KernelSpec()):
    """C_0 = E G^P(Z1 - Z2), Z1, Z2 ~ rho i.i.d.  Returns (mean, std error)."""
    rng = np.random.default_rng(seed)

    def sample(k):
        out_t, out_x = [], []
        have = 0
        while have < k:
            m = 2 * (k - have) + 1000
            t = rng.uniform(-1, 1, m)
            keep = rng.uniform(0, 1, m) < _bump(t) / np.exp(-1)
            t = t[keep]
            x = rng.uniform(-1, 1, (3 * m, 3))
            rr = np.linalg.norm(x, axis=1)
            ok = (rr < 1) & (rng.uniform(0, 1, 3 * m) < _bump(rr) / np.exp(-1))
            x = x[ok]
            j = min(len(t), len(x))
            out_t.append(t[:j])
            out_x.append(x[:j])
            have += j
        return np.concatenate(out_t)[:k], np.concatenate(out_x)[:k]

    t1, x1 = sample(n)
    t2, x2 = sample(n)
    vals = GP(t1 - t2, np.linalg.norm(x1 - x2, axis=1))
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(n))


def c2_exact():
    """Coefficient of |log eps| in C_2, from the large-scale limit of the integrand."""
    eta, w = _gl(200, 0, 30)
    return float((FOUR_PI ** -1.5 * np.exp(-eta ** 2 / 4) * erf(eta / 2) ** 2 * w).sum() / (8 * np.pi))


# ---------------------------------------------------------------- assemblies

def _lam(lambdas, j):
    return lambdas[j] if j < len(lambdas) else 0


def mass_constants(lambdas, Cn, Cnp, m):
    """(C, C') of the renormalised equation.  Cn, Cnp map n to constants."""
    C = sum((n + 1) ** 2 * factorial(n) * _lam(lambdas, n + 1) ** 2 * Cn[n] for n in range(2, m))
    C += sum(factorial(n + 2) * _lam(lambdas, n) * _lam(lambdas, n + 2) * Cn[n] for n in range(3, m - 1))
    Cp = sum(factorial(n + 1) * _lam(lambdas, n) * _lam(lambdas, n + 1) * Cnp[n] for n in range(3, m))
    return C, Cp


def compute_A(ahat, Cn, m):
    """A = sum_{j=3}^{m-1} (j+1)! a_j a_{j+1} C_j."""
    if len(ahat) > 2 and (ahat[0] * ahat[1] != 0 or ahat[2] != 0):
        warnings.warn("A is only finite when a0 a1 = a2 = 0")
    return sum(factorial(j + 1) * _lam(ahat, j) * _lam(ahat, j + 1) * Cn[j] for j in range(3, m))


def compute_B(a4, a3, a1p, a0pp, a2p):
    if a1p == 0:
        raise ZeroDivisionError("B needs a1' != 0")
    return a4 + 3 * a0pp * a3 ** 2 / (2 * a1p ** 2) - a2p * a3 / a1p


def _value(c, theta):
    return c.at(theta) if hasattr(c, "at") else c


def shifted(coeffs, theta, h, top=None):
    """a_j^(h)(theta) = sum_{k>=j} C(k, j) a_k(theta) h^(k-j), k <= top."""
    vals = [_value(c, theta) for c in coeffs]
    m = len(vals) - 1
    top = m if top is None else min(top, m)
    from math import comb
    return [sum(comb(k, j) * vals[k] * h ** (k - j) for k in range(j, top + 1)) for j in range(m + 1)]


def _const(constants, n):
    return constants(n) if callable(constants) else constants[n]


def lambda_weakly_nonlinear(delta, alpha, theta, h, ahat, constants):
    """Coefficients lambda_j^(delta) of the abstract equation, weakly nonlinear regime.

    ahat are the Taylor data of the effective potential (numbers or ThetaSeries),
    constants maps n >= 2 to C_n^(delta).
    """
    m = len(ahat) - 1
    a = shifted(ahat, theta, h)
    p = 1 / alpha
    lam = [0.0] * (m + 1)
    for j in range(3, m + 1):
        lam[j] = delta ** (p - 1) * a[j]
    lam[2] = delta ** (p - 1.5) * a[2]
    Cdth = sum((n + 1) ** 2 * factorial(n) * a[n + 1] ** 2 * _const(constants, n) for n in range(2, m))
    Cdth += sum(factorial(n + 2) * a[n] * a[n + 2] * _const(constants, n) for n in range(3, m - 1))
    Cpdth = sum(factorial(n + 1) * a[n] * a[n + 1] * _const(constants, n) for n in range(3, m))
    lam[1] = delta ** (p - 2) * a[1] - delta ** (2 * p - 2) * Cdth
    lam[0] = delta ** (p - 2.5) * a[0] - delta ** (2 * p - 2.5) * Cpdth \
        - 6 * lam[2] * lam[3] * _const(constants, 2)
    return lam


def lambda_weak_noise(delta, alpha, theta, h, a, constants, C0=None):
    """Coefficients lambda_j^(delta) in the weak-noise regime (degree-6 data).

    C0 defaults to delta * C_1^(delta) when constants provides key 1, which
    makes the Hermite rewrite exact at finite delta.
    """
    if len(a) != 7:
        raise ValueError("weak-noise assembly needs Taylor data up to degree 6")
    if C0 is None:
        C0 = delta * _const(constants, 1) if _has(constants, 1) else _const(constants, 0)
    s = shifted(a, theta, h)
    p = 1 / alpha
    d = delta
    lam = [0.0] * 7
    lam[6] = s[6] * d ** (2.5 * p - 1)
    lam[5] = s[5] * d ** (2 * p - 1)
    lam[4] = d ** (1.5 * p - 1) * (s[4] + 15 * s[6] * C0 * d ** p)
    lam[3] = d ** (p - 1) * (s[3] + 10 * s[5] * C0 * d ** p)
    lam[2] = d ** (0.5 * p - 1.5) * (s[2] + 6 * s[4] * C0 * d ** p + 45 * s[6] * C0 ** 2 * d ** (2 * p))
    Cd = sum((n + 1) ** 2 * factorial(n) * lam[n + 1] ** 2 * _const(constants, n) for n in range(2, 6))
    Cd += sum(factorial(n + 2) * lam[n] * lam[n + 2] * _const(constants, n) for n in range(3, 5))
    Cdp = d ** -0.5 * sum(factorial(n + 1) * lam[n] * lam[n + 1] * _const(constants, n) for n in range(3, 6))
    lam[1] = d ** -2 * (s[1] + 3 * s[3] * C0 * d ** p + 15 * s[5] * C0 ** 2 * d ** (2 * p)) - Cd
    lam[0] = d ** (-0.5 * p - 2.5) * (s[0] + s[2] * C0 * d ** p + 3 * s[4] * C0 ** 2 * d ** (2 * p)
                                      + 15 * s[6] * C0 ** 3 * d ** (3 * p)) \
        - Cdp - 6 * lam[2] * lam[3] * _const(constants, 2)
    return lam


def _has(constants, n):
    if callable(constants):
        try:
            constants(n)
            return True
        except (KeyError, ValueError):
            return False
    return n in constants


@dataclass
class ConstantsTable:
    epsilon: list
    C1: list
    Cn: dict
    Cnp: dict
    limits: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    kernel_spec_hash: str = ""

    @classmethod
    def compute(cls, eps_grid=None, nmax=6, kernels=None, mc_samples=400_000, seed=0):
        ker = kernels or default_kernels()
        eps_grid = list(eps_grid or [2.0 ** -k for k in range(2, 8)])
        C1 = [ker.c1(e) for e in eps_grid]
        Cn = {n: [ker.cn(n, e) for e in eps_grid] for n in range(2, nmax + 1)}
        Cnp = {n: [e ** -0.5 * c for e, c in zip(eps_grid, Cn[n])] for n in range(3, nmax + 1)}
        L = -np.log(eps_grid)
        if len(eps_grid) < 2:
            raise ValueError("need at least two eps values")
        if len(eps_grid) > 2:
            (slope, icpt), cov = np.polyfit(L, Cn[2], 1, cov=True)
        else:
            (slope, icpt), cov = np.polyfit(L, Cn[2], 1), np.full((2, 2), np.nan)
        mc, se = c0_monte_carlo(mc_samples, seed)
        limits = {"C0": ker.c0(), "C0_mc": mc, "c2": float(slope), "c2_exact": c2_exact()}
        errors = {"C0_mc": se, "c2": float(np.sqrt(cov[0, 0]))}
        for n in range(3, nmax + 1):
            k, c = np.polyfit(eps_grid, Cn[n], 1)
            limits["C%d" % n] = float(c)
            errors["C%d" % n] = float(abs(Cn[n][-1] - c))
            # untruncated P_rho limit, the one entering A
            kp, cp = np.polyfit(eps_grid, [ker.cn(n, e, with_g=False) for e in eps_grid], 1)
            limits["C%d_P" % n] = float(cp)
        return cls(eps_grid, C1, Cn, Cnp, limits, errors, ker.spec.digest())

    def to_json(self):
        d = {"epsilon": self.epsilon, "C1": self.C1}
        for n, v in self.Cn.items():
            d["C%d" % n] = v
        for n, v in self.Cnp.items():
            d["C%d'" % n] = v
        d.update(limits=self.limits, errors=self.errors, kernel_spec_hash=self.kernel_spec_hash)
        return json.dumps(d, indent=2)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        Cn = {int(k[1:]): v for k, v in d.items() if k.startswith("C") and k[1:].isdigit() and k != "C1"}
        Cnp = {int(k[1:-1]): v for k, v in d.items() if k.startswith("C") and k.endswith("'")}
        return cls(d["epsilon"], d["C1"], Cn, Cnp, d.get("limits", {}), d.get("errors", {}),
                   d.get("kernel_spec_hash", ""))
