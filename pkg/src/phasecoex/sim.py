"""Periodic lattice simulation of du = Lap u - V'(u) + sigma xi.

Semi-implicit Euler-Maruyama: the discrete Laplacian and the linear part of
V' are treated implicitly in Fourier space, the rest of the drift explicitly.
Noise is drawn from a Philox stream keyed by (seed, step), one normal per site
in row-major order, so reruns are bit-identical.
"""

from dataclasses import dataclass, field
import csv
import json

import numpy as np

from .constants import mass_constants
from .wick import hermite_eval, peval

__all__ = [
    "LatticeField", "SimConfig", "Trajectory", "SimulationBlowup", "noise", "simulate",
    "laplacian_symbol", "ou_variance", "rescale", "renormalised_drift", "micro_drift",
    "macro_coefficients", "batch_se",
]


class SimulationBlowup(RuntimeError):
    pass


@dataclass
class LatticeField:
    d: int
    N: int
    dx: float
    values: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, float)
        if self.d not in (1, 2, 3):
            raise ValueError("d must be 1, 2 or 3")
        if self.values.shape != (self.N,) * self.d:
            raise ValueError("values must have shape (N,)*d")

    @classmethod
    def constant(cls, d, N, dx, c=0.0):
        return cls(d, N, dx, np.full((N,) * d, float(c)))

    def save(self, path):
        self.values.astype("<f8").tofile(path)
        with open(str(path) + ".json", "w") as f:
            json.dump({"d": self.d, "N": self.N, "dx": self.dx, "t": self.t,
                       "dtype": "float64", "layout": "row-major"}, f)

    @classmethod
    def load(cls, path):
        with open(str(path) + ".json") as f:
            h = json.load(f)
        v = np.fromfile(path, dtype="<f8").reshape((h["N"],) * h["d"])
        return cls(h["d"], h["N"], h["dx"], v, h["t"])


@dataclass
class SimConfig:
    d: int = 1
    N: int = 64
    dx: float = 1.0
    dt: float = 0.01
    T: float = 1.0
    seed: int = 0
    vprime: tuple = ()           # drift is -sum_j vprime[j] u^j
    sigma: float = 1.0
    noise_mode: str = "white_lattice"
    noise_width: float = 0.0     # Gaussian mollification length for noise_mode='mollified'
    record_every: int = 1
    snapshots: tuple = ()        # step indices to keep
    blowup: float = 1e8

    def check(self):
        if self.seed is None:
            raise ValueError("seed is mandatory")
        if self.dt <= 0 or self.T < 0:
            raise ValueError("need dt > 0 and T >= 0")
        if self.dt >= self.dx ** 2 / (2 * self.d):
            raise ValueError("dt must be below dx^2/(2d)")
        if self.noise_mode not in ("white_lattice", "mollified"):
            raise ValueError("unknown noise mode %r" % self.noise_mode)


@dataclass
class Trajectory:
    times: np.ndarray
    mean: np.ndarray
    var: np.ndarray
    second: np.ndarray           # spatial mean of u^2
    snapshots: list = field(default_factory=list)
    final: LatticeField = None

    def to_csv(self, path):
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["time", "mean", "var", "second"])
            for row in zip(self.times, self.mean, self.var, self.second):
                w.writerow(["%.17g" % x for x in row])


def laplacian_symbol(d, N, dx):
    """Eigenvalues of minus the periodic nearest-neighbour Laplacian."""
    k = 2 * np.pi * np.fft.fftfreq(N)
    one = (2 - 2 * np.cos(k)) / dx ** 2
    lam = np.zeros((N,) * d)
    for ax in range(d):
        shape = [1] * d
        shape[ax] = N
        lam = lam + one.reshape(shape)
    return lam


def noise(seed, step, shape):
    """Standard normals for one time step, keyed by (seed, step)."""
    g = np.random.Generator(np.random.Philox(key=seed, counter=[0, step, 0, 0]))
    return g.standard_normal(shape)


def simulate(cfg, initial=None):
    cfg.check()
    d, N, dx, dt = cfg.d, cfg.N, cfg.dx, cfg.dt
    u = (initial.values.copy() if initial is not None else np.zeros((N,) * d))
    t0 = initial.t if initial is not None else 0.0
    coeffs = list(cfg.vprime) + [0.0, 0.0]
    lin = coeffs[1]
    rest = [coeffs[0], 0.0] + coeffs[2:]
    nonlinear = any(c != 0 for c in rest)
    lam = laplacian_symbol(d, N, dx)
    denom = 1 + dt * (lam + lin)
    amp = cfg.sigma * np.sqrt(dt) * dx ** (-d / 2)
    filt = None
    if cfg.noise_mode == "mollified":
        k2 = laplacian_symbol(d, N, dx)
        filt = np.exp(-k2 * cfg.noise_width ** 2 / 2)
    nsteps = int(round(cfg.T / dt))
    times, mean, var, second, snaps = [], [], [], [], []

    def record(step):
        times.append(t0 + step * dt)
        m = u.mean()
        s = (u * u).mean()
        mean.append(m)
        second.append(s)
        var.append(s - m * m)

    record(0)
    keep = set(cfg.snapshots)
    for step in range(nsteps):
        rhs = u
        if nonlinear:
            rhs = u - dt * peval(rest, u)
        uh = np.fft.fftn(rhs)
        w = amp * noise(cfg.seed, step, u.shape)
        wh = np.fft.fftn(w)
        if filt is not None:
            wh = wh * filt
        u = np.fft.ifftn((uh + wh) / denom).real
        if not np.all(np.isfinite(u)) or np.abs(u).max() > cfg.blowup:
            raise SimulationBlowup("field exceeded %g at step %d (t=%g)"
                                   % (cfg.blowup, step + 1, t0 + (step + 1) * dt))
        if (step + 1) % cfg.record_every == 0:
            record(step + 1)
        if step + 1 in keep:
            snaps.append(LatticeField(d, N, dx, u.copy(), t0 + (step + 1) * dt))
    final = LatticeField(d, N, dx, u, t0 + nsteps * dt)
    return Trajectory(np.array(times), np.array(mean), np.array(var), np.array(second), snaps, final)


def ou_variance(d, N, dx, mass, sigma=1.0, dt=None):
    """Stationary one-site variance of the lattice OU process.

    dt=None gives the continuous-time Fourier sum; otherwise the exact
    stationary variance of the semi-implicit scheme at that step.
    """
    lam = laplacian_symbol(d, N, dx) + mass
    if np.any(lam <= 0):
        raise ValueError("OU needs a positive mass")
    s2 = sigma ** 2 * dx ** (-d)
    if dt is None:
        per = s2 / (2 * lam)
    else:
        per = s2 / (lam * (2 + lam * dt))
    return float(per.mean())


def batch_se(x, nbatch=20):
    """Mean and batch-means standard error of a correlated series."""
    x = np.asarray(x, float)
    n = len(x) // nbatch
    b = x[:n * nbatch].reshape(nbatch, n).mean(1)
    return float(b.mean()), float(b.std(ddof=1) / np.sqrt(nbatch))


def rescale(x, alpha, h, eps, weak_noise=False):
    """u -> eps^(-a) (u(t/eps^(2 alpha), x/eps^alpha) - h) on lattice data.

    a = alpha/2, or (1+alpha)/2 in the weak-noise amplitude convention.
    Accepts a LatticeField or a Trajectory.
    """
    amp = eps ** (-(1 + alpha) / 2 if weak_noise else -alpha / 2)
    if isinstance(x, LatticeField):
        return LatticeField(x.d, x.N, x.dx * eps ** alpha, amp * (x.values - h), x.t * eps ** (2 * alpha))
    if isinstance(x, Trajectory):
        m = amp * (x.mean - h)
        return Trajectory(x.times * eps ** (2 * alpha), m, amp ** 2 * x.var,
                          amp ** 2 * x.var + m * m,
                          [rescale(s, alpha, h, eps, weak_noise) for s in x.snapshots],
                          rescale(x.final, alpha, h, eps, weak_noise) if x.final is not None else None)
    raise TypeError("expected LatticeField or Trajectory")


def renormalised_drift(u, lambdas, C1, m, eps=1.0, Cn=None, Cnp=None, C=None, Cp=None, C2=None):
    """-sum_{j>=4} lam_j eps^((j-3)/2) H_j - sum_{j<=3} lam_j H_j - (C u + C' + 6 lam2 lam3 C2).

    C, C' default to mass_constants(lambdas, Cn, Cnp, m) and C2 to Cn[2].
    """
    if len(lambdas) != m + 1:
        raise ValueError("need m + 1 coefficients")
    vals = u.values if isinstance(u, LatticeField) else np.asarray(u, float)
    if C is None or Cp is None:
        if Cn is None:
            C0, Cp0 = 0.0, 0.0
        else:
            C0, Cp0 = mass_constants(lambdas, Cn, Cnp or {}, m)
        C = C0 if C is None else C
        Cp = Cp0 if Cp is None else Cp
    if C2 is None:
        C2 = Cn[2] if Cn is not None and 2 in Cn else 0.0
    lam = [float(x) for x in lambdas] + [0.0] * 4
    out = np.zeros_like(vals, dtype=float)
    for j in range(m + 1):
        if lam[j] == 0:
            continue
        w = eps ** ((j - 3) / 2) if j >= 4 else 1.0
        out -= lam[j] * w * hermite_eval(j, vals, C1)
    out -= C * vals + Cp + 6 * lam[2] * lam[3] * C2
    if isinstance(u, LatticeField):
        return LatticeField(u.d, u.N, u.dx, out, u.t)
    return out


def micro_drift(u, vprime, delta, alpha, h):
    """-delta^(1/alpha - 5/2) V'(delta^(1/2) u + h)."""
    return -delta ** (1 / alpha - 2.5) * peval([float(c) for c in vprime], delta ** 0.5 * np.asarray(u, float) + h)


def macro_coefficients(vprime, eps):
    """Coefficients of eps^(-3/2) V'(eps^(1/2) u) as a polynomial in u."""
    return [float(c) * eps ** ((j - 3) / 2) for j, c in enumerate(vprime)]
