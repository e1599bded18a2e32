import math

import numpy as np
import pytest

from ntn_offload.bandwidth import (
    AccessCandidate,
    FeederCandidate,
    InfeasibleBudget,
    access_cap_feasible,
    access_coefficients,
    allocate_access,
    allocate_feeder,
    feeder_coefficients,
    quadratic_interval,
    share_envelope,
    unconstrained_opt_share,
)
from ntn_offload.oracles import GridSpec, enumerate_offload_subsets, grid_min_scalar, grid_minmax_simplex

B_H, SE_HS, SE_SG = 1e8, 4.0, 4.0
PROP_HS, PROP_SG = 1.6e-3, 1.7e-3


def test_feeder_coefficients_examples():
    a, b = feeder_coefficients([], B_H, SE_HS, SE_SG, 1.0, 1e-13)
    assert a == 0.0
    a, b = feeder_coefficients([82_000, 82_000], B_H, SE_HS, SE_SG, 1.0, 1e-13)
    assert math.isclose(a, 2 * 164_000 / 1e8 * 0.5, rel_tol=1e-12)
    assert math.isclose(b, 1e-5, rel_tol=1e-12)


def test_unconstrained_share_examples():
    assert unconstrained_opt_share(3.0, 3.0) == 1.0
    assert math.isclose(unconstrained_opt_share(4e-4, 1e-2), 0.2, rel_tol=1e-12)


def test_unconstrained_share_matches_grid_oracle():
    rng = np.random.default_rng(31)
    for _ in range(50):
        a = 10 ** rng.uniform(-4, 2)
        b = 10 ** rng.uniform(-4, 2)
        star = unconstrained_opt_share(a, b)
        grid = GridSpec(star / 10, star * 10, 100_001)
        rho_g, _ = grid_min_scalar(a, b, grid)
        step = (grid.hi - grid.lo) / (grid.n_points - 1)
        assert abs(star - rho_g) <= step


def test_quadratic_interval_reference():
    lo, hi = quadratic_interval(0.04, 1.0, 0.5)
    assert math.isclose(lo, 0.1, rel_tol=1e-9)
    assert math.isclose(hi, 0.4, rel_tol=1e-9)


def test_quadratic_interval_tangency():
    a, b = 0.3, 2.0
    sigma = 2.0 * math.sqrt(a * b)
    lo, hi = quadratic_interval(a, b, sigma)
    assert math.isclose(lo, hi, rel_tol=1e-7)
    assert math.isclose(lo, math.sqrt(a / b), rel_tol=1e-7)


def test_quadratic_interval_below_tangency_infeasible():
    a, b = 0.3, 2.0
    with pytest.raises(InfeasibleBudget):
        quadratic_interval(a, b, 2.0 * math.sqrt(a * b) * (1 - 1e-9))


def test_access_coefficients_examples():
    a, b = access_coefficients(82_000, 1.4e6, 4.0, 1000.0, 1e-13)
    assert math.isclose(a, 1000.0 * 82_000 / (1.4e6 * 4.0), rel_tol=1e-12)
    assert abs(a - 14.643) < 1e-3
    assert math.isclose(b, 1.4e-7, rel_tol=1e-12)
    a0, _ = access_coefficients(82_000, 1.4e6, 4.0, 0.0, 1e-13)
    assert a0 == 0.0


# ---------------------------------------------------------------------------
# Feeder allocation


def _feeder_objective(subset, all_tasks, rho_b, c_tau, c_Bh):
    """Edge-tier cost terms that depend on the relay decision and share."""
    tx = sum(c.d for c in subset) / B_H * (1 / SE_HS + 1 / SE_SG)
    cost = c_Bh * B_H * rho_b
    if subset:
        cost += c_tau * len(subset) * tx / rho_b
        cost += len(subset) * c_tau * 2 * (PROP_HS + PROP_SG)
        cost += sum(c.price_mcc for c in subset)
    kept_local = [c for c in all_tasks if c not in subset]
    cost += sum(c_tau * c.tau_h for c in kept_local)
    return cost


def _feeder_feasible(subset, rho_b, c_tau):
    if not subset:
        return True
    if not (0 < rho_b <= 1):
        return False
    tx = sum(c.d for c in subset) / B_H * (1 / SE_HS + 1 / SE_SG)
    for c in subset:
        if c.tau_ih + tx / rho_b + 2 * (PROP_HS + PROP_SG) > c.tau_max:
            return False
    a = c_tau * len(subset) * tx
    sigma = sum(c_tau * c.tau_h - c.price_mcc for c in subset)
    b = 1e-13 * B_H
    return a / rho_b + b * rho_b <= sigma * (1 + 1e-12)


def test_feeder_empty_set():
    alloc = allocate_feeder([], B_H, SE_HS, SE_SG, PROP_HS, PROP_SG, 1000.0, 1e-13)
    assert alloc.rho_B == 0.0
    assert alloc.kept_ids == ()


def test_feeder_single_task_interior_optimum():
    cand = FeederCandidate(task_id=0, d=1_000_000, tau_max=1.0, tau_ih=0.01, tau_h=0.5, price_mcc=0.1)
    # a = 5e-3 with c_tau=1; pick c_Bh so sqrt(a/b) = 0.5 sits inside the bounds.
    se = 4.0
    c_Bh = 0.02 / B_H
    alloc = allocate_feeder([cand], B_H, se, se, PROP_HS, PROP_SG, 1.0, c_Bh)
    assert alloc.kept_ids == (0,)
    assert math.isclose(alloc.rho_B, math.sqrt(alloc.recip_coeff / alloc.linear_coeff), rel_tol=1e-12)
    assert math.isclose(alloc.rho_B, 0.5, rel_tol=1e-12)


def test_feeder_negative_headroom_always_pruned():
    good = FeederCandidate(task_id=0, d=50_000, tau_max=0.6, tau_ih=0.01, tau_h=0.08, price_mcc=1.0)
    # Deadline below the unavoidable round trips.
    bad = FeederCandidate(task_id=1, d=100, tau_max=5e-3, tau_ih=1e-3, tau_h=0.09, price_mcc=1.0)
    alloc = allocate_feeder([good, bad], B_H, SE_HS, SE_SG, PROP_HS, PROP_SG, 1000.0, 1e-13)
    assert 1 not in alloc.kept_ids
    assert any(e.task_id == 1 and e.stage == "feeder_deadline" for e in alloc.pruned)


def test_feeder_against_subset_enumeration():
    rng = np.random.default_rng(77)
    c_tau, c_Bh = 1000.0, 1e-13
    for trial in range(25):
        cands = [
            FeederCandidate(
                task_id=i,
                d=float(rng.integers(10_000, 200_000)),
                tau_max=float(rng.uniform(0.05, 0.6)),
                tau_ih=float(rng.uniform(0.0, 0.05)),
                tau_h=float(rng.uniform(0.01, 0.1)),
                price_mcc=float(rng.uniform(0.0, 120.0)),
            )
            for i in range(5)
        ]
        alloc = allocate_feeder(cands, B_H, SE_HS, SE_SG, PROP_HS, PROP_SG, c_tau, c_Bh)
        kept = [c for c in cands if c.task_id in alloc.kept_ids]
        assert _feeder_feasible(kept, alloc.rho_B, c_tau) or not kept
        alg_cost = _feeder_objective(kept, cands, alloc.rho_B if kept else 1.0, c_tau, c_Bh)

        rho_grid = np.linspace(1e-4, 1.0, 2000)

        def evaluate(subset):
            if not subset:
                return True, _feeder_objective((), cands, 1.0, c_tau, c_Bh), None
            feas = [r for r in rho_grid if _feeder_feasible(subset, r, c_tau)]
            if not feas:
                return False, math.inf, None
            best = min(_feeder_objective(subset, cands, r, c_tau, c_Bh) for r in feas)
            return True, best, None

        _, oracle_cost, _ = enumerate_offload_subsets(cands, evaluate)
        # Greedy pruning is not claimed optimal; the oracle bounds it below.
        assert oracle_cost <= alg_cost * (1 + 1e-6) + 1e-9


def test_feeder_share_bounds_and_budget_postconditions():
    rng = np.random.default_rng(123)
    c_tau, c_Bh = 1000.0, 1e-13
    for _ in range(50):
        cands = [
            FeederCandidate(
                task_id=i,
                d=float(rng.integers(1_000, 300_000)),
                tau_max=float(rng.uniform(0.02, 0.6)),
                tau_ih=float(rng.uniform(0.0, 0.05)),
                tau_h=float(rng.uniform(0.005, 0.1)),
                price_mcc=float(rng.uniform(0.0, 150.0)),
            )
            for i in range(int(rng.integers(1, 8)))
        ]
        alloc = allocate_feeder(cands, B_H, SE_HS, SE_SG, PROP_HS, PROP_SG, c_tau, c_Bh)
        assert 0.0 <= alloc.rho_B <= 1.0
        kept = [c for c in cands if c.task_id in alloc.kept_ids]
        assert len(kept) + len(alloc.pruned) == len(cands)
        if kept:
            tx = sum(c.d for c in kept) / B_H * (1 / SE_HS + 1 / SE_SG)
            for c in kept:
                total = c.tau_ih + tx / alloc.rho_B + 2 * (PROP_HS + PROP_SG)
                assert total <= c.tau_max * (1 + 1e-9)
            cost = alloc.recip_coeff / alloc.rho_B + alloc.linear_coeff * alloc.rho_B
            assert cost <= alloc.budget * (1 + 1e-9)


# ---------------------------------------------------------------------------
# Access allocation


def _mk_access(i, d, tau_max, tau_h, tau_local, se, price):
    return AccessCandidate(
        task_id=i, d=d, tau_max=tau_max, tau_h=tau_h,
        tau_local=tau_local, spectral_eff=se, price_mec=price,
    )


def test_access_single_task_interior_optimum():
    # a = 0.64, b = 1: unconstrained share 0.8 within every bound.
    cand = _mk_access(0, 0.64, 1000.0, 0.0, 10.0, 1.0, 0.0)
    alloc = allocate_access([cand], 1.0, 1.0, 1.0)
    assert alloc.kept_ids == (0,)
    assert math.isclose(alloc.shares[0], 0.8, rel_tol=1e-9)


def test_access_two_identical_tasks_split_evenly():
    cands = [_mk_access(i, 0.64, 1000.0, 0.0, 10.0, 1.0, 0.0) for i in range(2)]
    alloc = allocate_access(cands, 1.0, 1.0, 1.0, n_bisect=60)
    # Individually both want 0.8; the channel binds at the fair split.
    assert math.isclose(alloc.shares[0], 0.5, rel_tol=1e-9)
    assert math.isclose(alloc.shares[1], 0.5, rel_tol=1e-9)
    costs = [0.64 / alloc.shares[i] + alloc.shares[i] for i in range(2)]
    assert math.isclose(costs[0], costs[1], rel_tol=1e-9)
    assert sum(alloc.shares.values()) <= 1.0 + 1e-12


def test_access_impossible_deadline_pruned_first():
    good = _mk_access(0, 1000.0, 0.5, 0.01, 1.0, 4.0, 0.0)
    bad = _mk_access(1, 1000.0, 0.01, 0.02, 1.0, 4.0, 0.0)  # tau_max below tau_h
    alloc = allocate_access([good, bad], 1.4e6, 1000.0, 1e-13)
    assert 1 not in alloc.kept_ids
    assert any(e.task_id == 1 and e.stage == "access_deadline" for e in alloc.pruned)


def _random_access_instance(rng, n):
    cands = []
    b = 1.0
    for i in range(n):
        a = 10 ** rng.uniform(-2, 1)
        t = a  # c_tau = 1
        floor = rng.uniform(0.005, 0.12)
        tau_h = rng.uniform(0.0, 0.1)
        tau_max = t / floor + tau_h
        gap = 2 * math.sqrt(a * b) * 10 ** rng.uniform(0.5, 1.5)
        cands.append(_mk_access(i, a, tau_max, tau_h, gap, 1.0, 0.0))
    return cands, b


def test_access_random_instances_match_minmax_oracle():
    rng = np.random.default_rng(2024)
    checked = 0
    for _ in range(80):
        n = int(rng.integers(2, 7))
        cands, b = _random_access_instance(rng, n)
        alloc = allocate_access(cands, 1.0, 1.0, 1.0, n_bisect=50)
        if len(alloc.kept_ids) != n:
            continue  # pruning makes the instances incomparable
        checked += 1
        assert sum(alloc.shares.values()) <= 1.0 + 1e-9
        recip = [c.d for c in cands]  # c_tau = 1, B_u = se = 1
        floors = [c.d / (c.tau_max - c.tau_h) for c in cands]
        alg_value = max(recip[i] / alloc.shares[i] + b * alloc.shares[i] for i in range(n))
        _, oracle_value = grid_minmax_simplex(recip, [b] * n, [(f, 1.0) for f in floors])
        eps = 2 ** -50 * (alloc.eta_max - alloc.eta_min)
        assert abs(alg_value - oracle_value) <= eps + 1e-9 * max(1.0, oracle_value)
    assert checked >= 20


def test_access_floors_respected_and_share_budget():
    rng = np.random.default_rng(5150)
    for _ in range(50):
        n = int(rng.integers(1, 9))
        cands, _ = _random_access_instance(rng, n)
        alloc = allocate_access(cands, 1.0, 1.0, 1.0)
        kept = [c for c in cands if c.task_id in alloc.kept_ids]
        assert len(kept) + len(alloc.pruned) == n
        assert sum(alloc.shares.values()) <= 1.0 + 1e-9
        for c in kept:
            rho = alloc.shares[c.task_id]
            floor = c.d / (c.tau_max - c.tau_h)
            assert rho >= floor * (1 - 1e-12)
            # Deadline honored: transmission at this share fits the headroom.
            assert c.d / rho <= (c.tau_max - c.tau_h) * (1 + 1e-9)


def test_access_realized_shares_are_per_task_optimal():
    # Convexity: no feasible unilateral move beats the realized share.
    rng = np.random.default_rng(99)
    cands, b = _random_access_instance(rng, 5)
    alloc = allocate_access(cands, 1.0, 1.0, 1.0)
    kept = [c for c in cands if c.task_id in alloc.kept_ids]
    recip = [c.d for c in kept]
    floors = [c.d / (c.tau_max - c.tau_h) for c in kept]
    lows, highs = share_envelope(alloc.eta, recip, b, floors)
    slack = 1.0 - sum(alloc.shares.values())
    for k, c in enumerate(kept):
        rho = alloc.shares[c.task_id]
        hi = min(highs[k], rho + slack)
        grid = np.linspace(lows[k], max(hi, lows[k]), 1000)
        realized = recip[k] / rho + b * rho
        best = min(recip[k] / g + b * g for g in grid if g > 0)
        assert realized <= best * (1 + 1e-9) + 1e-12


def test_access_cap_feasibility_is_monotone():
    rng = np.random.default_rng(404)
    cands, b = _random_access_instance(rng, 4)
    recip = [c.d for c in cands]
    floors = [c.d / (c.tau_max - c.tau_h) for c in cands]
    lo = 2.0 * max(math.sqrt(r * b) for r in recip)
    grid = np.linspace(lo, lo * 50, 400)
    flags = [access_cap_feasible(x, recip, b, floors) for x in grid]
    seen_true = False
    for f in flags:
        if seen_true:
            assert f
        seen_true = seen_true or f
