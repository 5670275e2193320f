import pytest

from phasecoex.catalog import CATALOG, MERGED, bound_symbol, run_entry, search_reduction
from phasecoex.graphs import Lin, ZETA, check_assumption, lambda_exponent
from phasecoex.symbols import generate_basis, homogeneity


@pytest.mark.parametrize("entry", CATALOG, ids=lambda e: e.name)
def test_entry_passes_and_matches(entry):
    G, v, pair, beats = run_entry(entry)
    assert v.passed, v.violations
    assert pair == tuple(entry.expected)
    assert beats


def test_bound_positive_beats_two_zeta():
    e = [e for e in CATALOG if e.name == "bound_positive"][0]
    _, _, pair, _ = run_entry(e)
    assert pair[1].gt(2 * ZETA, "kappa_first")


def test_merged_drawings_fail_condition_3():
    for name, build in MERGED.items():
        v = check_assumption(build())
        assert not v.passed
        assert {c for c, *_ in v.violations} == {3}


@pytest.mark.parametrize("m", [4, 5, 6])
def test_inventory_coverage(m):
    S = generate_basis(m, 0)
    taus = [s for s in S.sorted() if homogeneity(s).q < 0 and s.kind == "e"]
    assert taus
    for tau in taus:
        bounds = bound_symbol(tau)
        assert bounds and all(b.ok for b in bounds), [(b.component, b.pair) for b in bounds if not b.ok]


def test_search_recovers_catalog_graph():
    e = [e for e in CATALOG if e.name == "bound_1_renorm"][0]
    R = search_reduction(e.build())
    assert R is not None
    eps, lam = lambda_exponent(R)
    assert lam.gt(Lin(-1) * 2 - Lin(0, 0, 1), "kappa_first") or lam.gt(-2)
