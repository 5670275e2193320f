"""Command line front end.  Exit codes: 0 ok, 1 error, 2 uncharted or ambiguous."""

from fractions import Fraction
import hashlib
import json
import sys

import click

from . import __version__

UNCHARTED = 2


def _hash(obj):
    return hashlib.sha256(json.dumps(obj, sort_keys=True, default=str).encode()).hexdigest()[:16]


def _emit(obj, out):
    text = json.dumps(obj, indent=2, default=str)
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        click.echo(text)


def _eps_grid(text):
    if not text:
        return None
    try:
        grid = [float(Fraction(x)) for x in text.split(",")]
    except ValueError:
        raise click.BadParameter("eps grid must be a comma separated list of numbers")
    if any(not 0 < e < 1 for e in grid):
        raise click.BadParameter("eps values must lie in (0, 1)")
    return grid


@click.group()
@click.version_option(__version__)
def cli():
    """Renormalisation data and scaling-limit classification."""


@cli.command()
@click.option("--m", type=int, default=4, show_default=True)
@click.option("--gamma", default="0", show_default=True)
@click.option("--kappa", default="1/1000", show_default=True)
@click.option("--out", type=click.Path(), default=None)
def symbols(m, gamma, kappa, out):
    """List the symbol basis below gamma with homogeneities."""
    from .symbols import generate_basis, homogeneity, render
    S = generate_basis(m, Fraction(gamma), Fraction(kappa))
    items = [{"sym": render(s), "hom": str(homogeneity(s)), "tags": sorted(S.tags[s])} for s in S.sorted()]
    cfg = {"m": m, "gamma": gamma, "kappa": kappa}
    _emit({"version": __version__, "config_hash": _hash(cfg), "config": cfg, "symbols": items}, out)


@cli.command()
@click.option("--eps-grid", default=None, help="comma separated, default 2^-k for k=2..7")
@click.option("--nmax", type=int, default=6, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--mc-samples", type=int, default=400_000, show_default=True)
@click.option("--out", type=click.Path(), default=None)
def constants(eps_grid, nmax, seed, mc_samples, out):
    """Tabulate C_1, C_n, C_n' on an eps grid with extrapolated limits."""
    from .constants import ConstantsTable
    if nmax < 2:
        raise click.BadParameter("nmax must be at least 2")
    tab = ConstantsTable.compute(_eps_grid(eps_grid), nmax=nmax, mc_samples=mc_samples, seed=seed)
    d = json.loads(tab.to_json())
    cfg = {"eps_grid": tab.epsilon, "nmax": nmax, "seed": seed, "mc_samples": mc_samples}
    d.update(version=__version__, config_hash=_hash(cfg))
    _emit(d, out)


def _load_constants(path, inline):
    c = dict(inline or {})
    if path:
        with open(path, encoding="utf-8") as f:
            tab = json.load(f)
        lim = tab.get("limits", {})
        for k, v in lim.items():
            c.setdefault(k, v)
    return c


def _potential(d, consts):
    from .classifier import PotentialSpec, ThetaExpansion
    from .wick import ThetaSeries, effective_coefficients
    regime = d.get("regime")
    m = int(d["m"])
    slots = [ThetaSeries(0.0, 0.0, 0.0) for _ in range(m + 1)]
    for c in d["coeffs"]:
        j = int(c["j"])
        if not 0 <= j <= m:
            raise click.ClickException("coefficient index %d outside 0..%d" % (j, m))
        slots[j] = ThetaSeries(float(c.get("a", 0)), float(c.get("a1", 0)), float(c.get("a2", 0)))
    if regime == "weak_noise":
        if m < 6:
            raise click.ClickException("weak-noise input needs coefficients through degree 6")
        if not any(int(c["j"]) == 1 and "a1" in c for c in d["coeffs"]):
            raise click.ClickException("weak-noise input needs a1' (key a1 on j=1) to form B")
    if d.get("raw") and regime == "weakly_nonlinear":
        if "C0" not in consts:
            raise click.ClickException("raw potential needs C0 (inline or --constants)")
        slots = effective_coefficients(slots, consts["C0"])
    p = PotentialSpec(regime, slots)
    terms = tuple((t["rho"], str(t["beta"]), int(t.get("log", 0))) for t in d.get("theta", []))
    return p, ThetaExpansion(terms)


@cli.command()
@click.argument("potential", type=click.Path(exists=True))
@click.option("--constants", "const_path", type=click.Path(exists=True), default=None)
@click.option("--tol", type=float, default=1e-12, show_default=True)
@click.option("--out", type=click.Path(), default=None)
def classify(potential, const_path, tol, out):
    """Classify the scaling limit for a potential JSON file."""
    from .classifier import classify as run
    with open(potential, encoding="utf-8") as f:
        d = json.load(f)
    consts = _load_constants(const_path, d.get("constants"))
    p, theta = _potential(d, consts)
    try:
        res = run(p, theta, consts, tol)
    except KeyError as e:
        raise click.ClickException("missing constant %s" % e)
    rep = res.to_dict()
    rep.update(version=__version__, config_hash=_hash({"input": d, "tol": tol}))
    _emit(rep, out)
    if res.status in ("uncharted", "ambiguous"):
        sys.exit(UNCHARTED)


@cli.command()
@click.argument("source", default="catalog")
@click.option("--cond4", type=click.Choice(["hq15", "printed", "outgoing_a"]), default="hq15")
@click.option("--out", type=click.Path(), default=None)
def graphs(source, cond4, out):
    """Check the stored catalog, or a graph DSL file."""
    from .catalog import CATALOG, run_entry
    from .graphs import check_assumption, lambda_exponent, parse_graph
    rows = []
    ok = True
    if source == "catalog":
        for e in CATALOG:
            G, v, pair, beats = run_entry(e, cond4)
            match = pair is not None and tuple(map(str, pair)) == tuple(map(str, e.expected))
            ok = ok and v.passed and match
            rows.append({"name": e.name, "passed": v.passed, "pair": None if pair is None else [str(x) for x in pair],
                         "expected": [str(x) for x in e.expected], "match": match,
                         "target": str(e.target_exponent()), "beats_target": beats,
                         "verdict": v.to_dict()})
    else:
        with open(source, encoding="utf-8") as f:
            G = parse_graph(f.read())
        v = check_assumption(G, cond4=cond4)
        pair = lambda_exponent(G, cond4=cond4) if v.passed else None
        ok = v.passed
        rows.append({"name": source, "passed": v.passed,
                     "pair": None if pair is None else [str(x) for x in pair], "verdict": v.to_dict()})
    _emit({"version": __version__, "config_hash": _hash({"source": source, "cond4": cond4}),
           "graphs": rows, "all_passed": ok}, out)
    if not ok:
        sys.exit(1)


@cli.command()
@click.option("--d", type=click.IntRange(1, 3), default=1, show_default=True)
@click.option("--n", "N", type=int, default=64, show_default=True)
@click.option("--dx", type=float, default=1.0, show_default=True)
@click.option("--dt", type=float, default=0.05, show_default=True)
@click.option("--t", "T", type=float, default=100.0, show_default=True)
@click.option("--mass", type=float, default=1.0, show_default=True)
@click.option("--vprime", default=None, help="comma separated V' coefficients, overrides --mass")
@click.option("--sigma", type=float, default=1.0, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--burn", type=float, default=20.0, show_default=True)
@click.option("--out", type=click.Path(), default=None, help="CSV path for the time series")
def simulate(d, N, dx, dt, T, mass, vprime, sigma, seed, burn, out):
    """Run the lattice equation and summarise; OU runs are checked against the closed form."""
    from .sim import SimConfig, batch_se, ou_variance, simulate as run
    coeffs = tuple(float(x) for x in vprime.split(",")) if vprime else (0.0, mass)
    cfg = SimConfig(d=d, N=N, dx=dx, dt=dt, T=T, seed=seed, vprime=coeffs, sigma=sigma)
    try:
        tr = run(cfg)
    except ValueError as e:
        raise click.ClickException(str(e))
    if out:
        tr.to_csv(out)
    rep = {"version": __version__, "config_hash": _hash(cfg.__dict__), "config": cfg.__dict__,
           "final_mean": float(tr.mean[-1]), "final_var": float(tr.var[-1])}
    k = int(round(burn / dt))
    if len(tr.second) > k + 40:
        m, se = batch_se(tr.second[k:])
        rep["second_moment"] = {"mean": m, "se": se}
        if len(coeffs) == 2 and coeffs[0] == 0 and coeffs[1] > 0:
            ref = ou_variance(d, N, dx, coeffs[1], sigma, dt)
            rep["ou_check"] = {"closed_form": ref, "continuous_time": ou_variance(d, N, dx, coeffs[1], sigma),
                               "z": (m - ref) / se if se > 0 else None,
                               "within_3se": abs(m - ref) <= 3 * se}
    _emit(rep, None)


@cli.command()
@click.option("--m", type=int, default=4, show_default=True)
@click.option("--out", type=click.Path(), default=None)
def report(m, out):
    """Summary of the symbolic side: inventory sizes and catalog status."""
    from .catalog import CATALOG, bound_symbol, run_entry
    from .symbols import generate_basis, homogeneity
    S = generate_basis(m, 0)
    neg = [s for s in S.sorted() if homogeneity(s).q < 0]
    cat = {e.name: run_entry(e)[1].passed for e in CATALOG}
    bounds = [b for s in neg if "E" in str(s) for b in bound_symbol(s)]
    _emit({"version": __version__, "config_hash": _hash({"m": m}), "m": m,
           "basis_size": len(S), "negative": len(neg), "catalog": cat,
           "inventory_components": len(bounds), "inventory_ok": all(b.ok for b in bounds)}, out)


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return 1
    except click.Abort:
        return 1
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1
    except Exception as e:
        click.echo("error: %s" % e, err=True)
        return 1
    return 0


def entry():
    sys.exit(main())
