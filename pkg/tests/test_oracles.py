import math

import numpy as np
import pytest

from ntn_offload.oracles import (
    GridSpec,
    enumerate_offload_subsets,
    grid_min_scalar,
    grid_minmax_simplex,
)


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(1.0, 1.0, 10)
    with pytest.raises(ValueError):
        GridSpec(0.0, 1.0, 1)


def test_grid_min_scalar_known_optimum():
    grid = GridSpec(0.001, 10.0, 1_000_001)
    rho, _ = grid_min_scalar(1.0, 1.0, grid)
    step = (grid.hi - grid.lo) / (grid.n_points - 1)
    assert abs(rho - 1.0) <= step


def test_grid_min_scalar_matches_closed_form():
    grid = GridSpec(0.01, 2.0, 1_000_001)
    rho, _ = grid_min_scalar(4e-4, 1e-2, grid)
    step = (grid.hi - grid.lo) / (grid.n_points - 1)
    assert abs(rho - 0.2) <= step


def test_grid_min_scalar_monotone_when_a_zero():
    grid = GridSpec(0.05, 1.0, 1001)
    rho, _ = grid_min_scalar(0.0, 1.0, grid)
    assert rho == grid.lo


def test_minmax_two_identical_tasks():
    rhos, value = grid_minmax_simplex([0.64, 0.64], [1.0, 1.0], [(0.0, 1.0)] * 2)
    assert math.isclose(rhos[0], 0.5, rel_tol=1e-6)
    assert math.isclose(rhos[1], 0.5, rel_tol=1e-6)
    assert math.isclose(value, 0.64 / 0.5 + 0.5, rel_tol=1e-9)


def test_minmax_single_task_reduces_to_clipped_scalar():
    rhos, value = grid_minmax_simplex([4.0], [1.0], [(0.0, 1.0)])
    # Unconstrained optimum is 2, clipped to the box edge.
    assert math.isclose(rhos[0], 1.0, rel_tol=1e-9)
    assert math.isclose(value, 5.0, rel_tol=1e-9)
    rhos, value = grid_minmax_simplex([0.04], [1.0], [(0.0, 1.0)])
    assert math.isclose(rhos[0], 0.2, rel_tol=1e-6)


def test_minmax_respects_lower_bounds():
    rhos, value = grid_minmax_simplex([1.0, 1.0], [1.0, 1.0], [(0.6, 1.0), (0.1, 1.0)])
    assert rhos[0] >= 0.6 - 1e-12
    assert sum(rhos) <= 1.0 + 1e-12
    assert value >= 1.0 / 0.4 + 0.4 - 1e-9  # second task capped at 0.4


def test_minmax_never_reports_infeasible_point():
    rng = np.random.default_rng(8)
    for _ in range(30):
        n = int(rng.integers(1, 5))
        a = [10 ** rng.uniform(-2, 1) for _ in range(n)]
        lows = list(rng.dirichlet(np.ones(n)) * rng.uniform(0.1, 0.9))
        rhos, value = grid_minmax_simplex(a, [1.0] * n, [(lo, 1.0) for lo in lows])
        assert sum(rhos) <= 1.0 + 1e-9
        for k in range(n):
            assert lows[k] - 1e-12 <= rhos[k] <= 1.0 + 1e-12
            assert a[k] / rhos[k] + rhos[k] <= value * (1 + 1e-9)


def test_enumerate_all_infeasible_returns_empty():
    def evaluate(subset):
        if not subset:
            return True, 10.0, "empty"
        return False, math.inf, None

    best, cost, payload = enumerate_offload_subsets([1, 2, 3], evaluate)
    assert best == ()
    assert cost == 10.0
    assert payload == "empty"


def test_enumerate_single_feasible_singleton():
    def evaluate(subset):
        if subset == (2,):
            return True, 1.0, "hit"
        if not subset:
            return True, 5.0, None
        return False, math.inf, None

    best, cost, payload = enumerate_offload_subsets([1, 2], evaluate)
    assert best == (2,)
    assert cost == 1.0
    assert payload == "hit"


def test_enumerate_caps_input_size():
    with pytest.raises(ValueError):
        enumerate_offload_subsets(list(range(17)), lambda s: (True, 0.0, None))
