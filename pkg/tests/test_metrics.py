import numpy as np
import pytest

from dtq import (
    DensityVector,
    GridMismatch,
    GridSpec,
    cdf_on_grid,
    compare_to_exact,
    evolve,
    exact_density_on_grid,
    get_problem,
    ks_error,
    l1_error,
    linf_error,
    select_grid,
)

GRID = GridSpec(h=0.5, k=0.25, M=4, N=2)


def _dv(values):
    return DensityVector(np.asarray(values, dtype=float), GRID, 1)


def test_errors_vanish_on_equal_inputs():
    a = _dv(np.linspace(0.0, 1.0, GRID.num_nodes))
    assert l1_error(a, a) == 0.0
    assert linf_error(a, a) == 0.0
    assert ks_error(a, a) == 0.0


def test_l1_constant_difference():
    a = _dv(np.full(GRID.num_nodes, 2.0))
    b = _dv(np.full(GRID.num_nodes, 1.5))
    assert l1_error(a, b) == pytest.approx(GRID.k * GRID.num_nodes * 0.5, rel=1e-15)


def test_linf_single_node_perturbation():
    base = np.linspace(0.0, 1.0, GRID.num_nodes)
    bumped = base.copy()
    bumped[3] += 1e-4
    assert linf_error(_dv(base), _dv(bumped)) == pytest.approx(1e-4, rel=1e-12)


def test_linf_at_most_l1_over_k():
    rng = np.random.default_rng(9)
    for _ in range(20):
        a = _dv(rng.uniform(0, 1, GRID.num_nodes))
        b = _dv(rng.uniform(0, 1, GRID.num_nodes))
        assert linf_error(a, b) <= l1_error(a, b) / GRID.k
        assert ks_error(a, b) <= l1_error(a, b)


def test_grid_mismatch_raises():
    other = DensityVector(np.ones(GRID.num_nodes), GridSpec(h=0.25, k=0.25, M=4, N=4), 1)
    a = _dv(np.ones(GRID.num_nodes))
    for fn in (l1_error, linf_error, ks_error):
        with pytest.raises(GridMismatch):
            fn(a, other)


def test_cdf_zero_density():
    np.testing.assert_array_equal(cdf_on_grid(_dv(np.zeros(GRID.num_nodes))), 0.0)


def test_cdf_final_entry_is_mass():
    rng = np.random.default_rng(1)
    d = _dv(rng.uniform(0, 2, GRID.num_nodes))
    cdf = cdf_on_grid(d)
    assert cdf[-1] == pytest.approx(d.mass, rel=1e-14)


def test_cdf_monotone_for_nonnegative_input():
    rng = np.random.default_rng(4)
    for _ in range(10):
        cdf = cdf_on_grid(_dv(rng.uniform(0, 1, GRID.num_nodes)))
        assert np.all(np.diff(cdf) >= 0)


def test_exact_ex1_cdf_reaches_one():
    grid = select_grid(0.01, 1.0)
    exact = exact_density_on_grid(get_problem("ex1"), grid, 1.0)
    assert cdf_on_grid(exact)[-1] == pytest.approx(1.0, abs=1e-3)


def test_metric_axioms_on_random_vectors():
    rng = np.random.default_rng(42)
    for _ in range(25):
        a = _dv(rng.uniform(0, 1, GRID.num_nodes))
        b = _dv(rng.uniform(0, 1, GRID.num_nodes))
        c = _dv(rng.uniform(0, 1, GRID.num_nodes))
        for fn in (l1_error, linf_error, ks_error):
            assert fn(a, b) == fn(b, a)
            assert fn(a, c) <= fn(a, b) + fn(b, c) + 1e-12


def test_l1_invariant_under_simultaneous_reordering():
    rng = np.random.default_rng(8)
    a = rng.uniform(0, 1, GRID.num_nodes)
    b = rng.uniform(0, 1, GRID.num_nodes)
    perm = rng.permutation(GRID.num_nodes)
    assert l1_error(_dv(a), _dv(b)) == pytest.approx(
        l1_error(_dv(a[perm]), _dv(b[perm])), rel=1e-12
    )


def test_ks_below_l1_on_recorded_ex1_run():
    p = get_problem("ex1")
    d = evolve(p, T=1.0, h=0.05)
    rep = compare_to_exact(p, d, 1.0)
    assert rep.ks < rep.l1


def test_error_report_fields():
    p = get_problem("ex1")
    d = evolve(p, T=1.0, h=0.2)
    rep = compare_to_exact(p, d, 1.0)
    assert rep.problem == "ex1"
    assert rep.h == 0.2 and rep.k == d.grid.k and rep.M == d.grid.M
    for value in (rep.l1, rep.linf, rep.ks, rep.normalization_defect):
        assert value >= 0 and np.isfinite(value)
