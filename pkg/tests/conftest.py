"""Shared fixtures: randomized scenarios and a reusable snapshot corpus."""
from __future__ import annotations

from dataclasses import replace

import numpy as np
import pytest

from ntn_offload.orchestrator import METHODS, run_snapshot, tasks_for_snapshot
from ntn_offload.scenario import (
    ComputeParams,
    CostParams,
    RadioParams,
    SHARE_POLICIES,
    default_scenario,
    validate_scenario,
)


def random_scenario(rng: np.random.Generator):
    """A validated scenario with randomized knobs, exercising regimes from
    all-local to heavy offloading with pruning."""
    n_gds = int(rng.integers(2, 15))
    seed = int(rng.integers(0, 2**31))
    base = default_scenario(n_gds=n_gds, seed=seed)
    radio = replace(
        base.radio,
        B_u=float(rng.choice([0.7e6, 1.4e6, 2.8e6])),
        M_h_d=int(rng.choice([4, 16, 64])),
        rician_K=float(rng.choice([0.0, 1.0, 10.0, 100.0])),
    )
    cost = CostParams(
        c_tau=float(10 ** rng.uniform(0.5, 5.0)),
        c_Bu=float(10 ** rng.uniform(-14.0, -11.0)),
        c_Bh=float(10 ** rng.uniform(-14.0, -11.0)),
    )
    compute = ComputeParams(
        F_h=float(10 ** rng.uniform(9.0, 10.5)),
        f_local=float(10 ** rng.uniform(7.0, 9.3)),
        haps_share_policy=str(rng.choice(SHARE_POLICIES)),
    )
    mix = rng.dirichlet([1.0, 1.0, 1.0])
    classes = tuple(
        replace(spec, mix_fraction=float(mix[k]), rel_std=float(rng.uniform(0.0, 0.2)))
        for k, spec in enumerate(base.classes)
    )
    return validate_scenario(
        replace(base, radio=radio, cost=cost, compute=compute, classes=classes)
    )


@pytest.fixture(scope="session")
def snapshot_corpus():
    """500 randomized snapshot reports cycling through all methods."""
    rng = np.random.default_rng(20240811)
    corpus = []
    for k in range(500):
        scn = random_scenario(rng)
        tasks = tasks_for_snapshot(scn)
        method = METHODS[k % len(METHODS)]
        corpus.append((scn, tasks, run_snapshot(scn, tasks, method)))
    return corpus


@pytest.fixture(scope="session")
def default_snapshot():
    scn = default_scenario()
    tasks = tasks_for_snapshot(scn)
    return scn, tasks, run_snapshot(scn, tasks)
