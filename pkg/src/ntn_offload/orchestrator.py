"""Snapshot and sweep execution.

One snapshot runs the full pipeline: draw channels, start from equal
shares, resolve both pricing games, allocate the access channel (possibly
reverting tasks to local), allocate the feeder chain (possibly reverting
tasks to the edge), then account every delay and cost at the final state.

Two benchmarks reuse the same machinery: `fixed-max` reprices every task
at the highest per-tier price the proposed policy produced on the same
snapshot, `no-bw-opt` replaces both allocators with equal shares plus
deadline pruning.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from . import bandwidth, cost, pricing
from .channel import AccessLinkState, draw_access_states, feeder_states
from .delay import DelayBreakdown, compute_delay, feeder_hop_delay, propagation_delay
from .scenario import (
    SHARE_POLICY_COMPUTED,
    Scenario,
    Task,
    validate_scenario,
)
from .taskgen import generate_tasks

METHOD_PROPOSED = "proposed"
METHOD_FIXED_MAX = "fixed-max"
METHOD_NO_BW_OPT = "no-bw-opt"
METHODS = (METHOD_PROPOSED, METHOD_FIXED_MAX, METHOD_NO_BW_OPT)

PLACE_LOCAL = "local"
PLACE_MEC = "mec"
PLACE_MCC = "mcc"


@dataclass(frozen=True)
class TaskOutcome:
    task_id: int
    payload_class: str
    d: int
    mu: float
    tau_max: float
    placement: str
    deadline_miss: bool
    beta_uh: int
    beta_hs: int
    price_mec: float
    price_mcc: float
    mec_bounds: Optional[tuple[float, float]]
    mcc_bounds: Optional[tuple[float, float]]
    rho: float
    tau_local: float
    tau_h: float
    tau_ih_pricing: float  # access delay seen by the pricing stage
    delays: DelayBreakdown


@dataclass(frozen=True)
class SnapshotReport:
    method: str
    seed: int
    c_tau: float
    outcomes: tuple[TaskOutcome, ...]
    rho_b: float
    eta_access: Optional[float]
    eta_bounds: Optional[tuple[float, float]]
    tier: cost.TierCosts
    pruning: tuple[bandwidth.PruneEvent, ...]
    tau_hs: float
    tau_sg: float
    # Feeder delays the pricing stage assumed (full candidate set, whole link).
    pricing_tau_hs: float = 0.0
    pricing_tau_sg: float = 0.0

    @property
    def n_offloaded(self) -> int:
        return sum(o.beta_uh for o in self.outcomes)

    def pruned_ids(self) -> set[int]:
        return {e.task_id for e in self.pruning}


@dataclass(frozen=True)
class SweepCell:
    c_tau: float
    method: str
    real_cost_mean: dict[str, float]
    real_cost_std: dict[str, float]
    placement_fraction: dict[tuple[str, str], float]
    offload_count_mean: float


@dataclass(frozen=True)
class SweepResult:
    c_tau_grid: tuple[float, ...]
    methods: tuple[str, ...]
    n_snapshots: int
    base_seed: int
    cells: tuple[SweepCell, ...]
    reports: tuple[SnapshotReport, ...]


@dataclass(frozen=True)
class _Channels:
    access: list[AccessLinkState]
    se_hs: float
    se_sg: float
    prop_hs: float
    prop_sg: float


def _draw_channels(scenario: Scenario) -> _Channels:
    rng = np.random.default_rng([int(scenario.seed), 1])
    access = draw_access_states(scenario, rng)
    hs, sg = feeder_states(scenario)
    return _Channels(
        access=access,
        se_hs=hs.spectral_eff,
        se_sg=sg.spectral_eff,
        prop_hs=propagation_delay(scenario.haps_pos, scenario.leo_pos),
        prop_sg=propagation_delay(scenario.leo_pos, scenario.gw_pos),
    )


def _equal_share_access(kept: list[bandwidth.AccessCandidate], B_u: float):
    """Equal shares with deadline pruning only (no cost optimization)."""
    pruned: list[bandwidth.PruneEvent] = []
    while kept:
        rho = 1.0 / len(kept)
        heads = [
            c.tau_max - c.tau_h - c.d / (rho * B_u * c.spectral_eff) for c in kept
        ]
        if min(heads) >= 0.0:
            break
        k = min(range(len(kept)), key=lambda j: (heads[j], kept[j].task_id))
        pruned.append(
            bandwidth.PruneEvent(kept[k].task_id, "access_deadline", "equal share misses the deadline")
        )
        del kept[k]
    shares = {c.task_id: 1.0 / len(kept) for c in kept} if kept else {}
    return bandwidth.AccessAllocation(
        shares, None, None, None, tuple(c.task_id for c in kept), tuple(pruned)
    )


def _equal_share_feeder(
    kept: list[bandwidth.FeederCandidate],
    B_h: float,
    se_hs: float,
    se_sg: float,
    prop_hs: float,
    prop_sg: float,
):
    """Whole feeder link with deadline pruning only."""
    pruned: list[bandwidth.PruneEvent] = []
    round_trips = 2.0 * (prop_hs + prop_sg)
    while kept:
        tx = (sum(c.d for c in kept) / B_h) * (1.0 / se_hs + 1.0 / se_sg)
        heads = [c.tau_max - c.tau_ih - tx - round_trips for c in kept]
        if min(heads) >= 0.0:
            break
        k = min(range(len(kept)), key=lambda j: (heads[j], kept[j].task_id))
        pruned.append(
            bandwidth.PruneEvent(kept[k].task_id, "feeder_deadline", "full link misses the deadline")
        )
        del kept[k]
    return bandwidth.FeederAllocation(
        1.0, tuple(c.task_id for c in kept), tuple(pruned), 0.0, 0.0, 0.0
    )


def _run_pipeline(
    scenario: Scenario,
    tasks: Sequence[Task],
    ch: _Channels,
    f_h: float,
    fixed_prices: Optional[tuple[float, float]],
    bw_opt: bool,
) -> SnapshotReport:
    r, c = scenario.radio, scenario.cost
    n = len(tasks)
    se = {s.gd_id: s.spectral_eff for s in ch.access}

    tau_local = [compute_delay(t.d, t.mu, scenario.compute.f_local) for t in tasks]
    tau_h = [compute_delay(t.d, t.mu, f_h) for t in tasks]
    tx_unit = [t.d / (r.B_u * se[t.id]) for t in tasks]  # access time at full band
    rho0 = 1.0 / n
    tau_ih0 = [u / rho0 for u in tx_unit]

    feeder_ctx = pricing.FeederContext(
        B_h=r.B_h, se_hs=ch.se_hs, se_sg=ch.se_sg,
        prop_hs=ch.prop_hs, prop_sg=ch.prop_sg, rho_B=1.0,
    )
    quotes, decisions = pricing.solve_pricing_game(
        tasks, tau_local, tau_h, tau_ih0, [rho0] * n, feeder_ctx,
        r.B_u, c.c_tau, c.c_Bu, scenario.price_margin_eps,
        fixed_prices=fixed_prices,
    )
    beta_uh = {t.id: d.beta_uh for t, d in zip(tasks, decisions)}
    beta_hs = {t.id: d.beta_hs for t, d in zip(tasks, decisions)}
    quote_by_id = {q.task_id: q for q in quotes}
    candidate_bits = sum(t.d for t in tasks if beta_uh[t.id])
    est_hs, est_sg = feeder_ctx.hop_delays(candidate_bits)

    # Access channel allocation over the offloading set.
    acc_cands = [
        bandwidth.AccessCandidate(
            task_id=t.id, d=t.d, tau_max=t.tau_max, tau_h=tau_h[k],
            tau_local=tau_local[k], spectral_eff=se[t.id],
            price_mec=quote_by_id[t.id].c_mec,
        )
        for k, t in enumerate(tasks)
        if beta_uh[t.id]
    ]
    if bw_opt:
        access = bandwidth.allocate_access(acc_cands, r.B_u, c.c_tau, c.c_Bu)
    else:
        access = _equal_share_access(list(acc_cands), r.B_u)
    for ev in access.pruned:
        beta_uh[ev.task_id] = 0
        beta_hs[ev.task_id] = 0

    rho = {t.id: access.shares.get(t.id, 0.0) for t in tasks}
    tau_ih = {
        t.id: (tx_unit[k] / rho[t.id] if beta_uh[t.id] else 0.0)
        for k, t in enumerate(tasks)
    }

    # Feeder allocation over the cloud-bound survivors.
    feed_cands = [
        bandwidth.FeederCandidate(
            task_id=t.id, d=t.d, tau_max=t.tau_max, tau_ih=tau_ih[t.id],
            tau_h=tau_h[k], price_mcc=quote_by_id[t.id].c_mcc,
        )
        for k, t in enumerate(tasks)
        if beta_uh[t.id] and beta_hs[t.id]
    ]
    if bw_opt:
        feeder = bandwidth.allocate_feeder(
            feed_cands, r.B_h, ch.se_hs, ch.se_sg, ch.prop_hs, ch.prop_sg,
            c.c_tau, c.c_Bh,
        )
    else:
        feeder = _equal_share_feeder(
            list(feed_cands), r.B_h, ch.se_hs, ch.se_sg, ch.prop_hs, ch.prop_sg
        )
    for ev in feeder.pruned:
        beta_hs[ev.task_id] = 0

    # Final delays and costs at the realized shares.
    relayed_bits = sum(t.d for t in tasks if beta_hs[t.id])
    tau_hs = feeder_hop_delay(relayed_bits, feeder.rho_B * r.B_h * ch.se_hs, ch.prop_hs)
    tau_sg = feeder_hop_delay(relayed_bits, feeder.rho_B * r.B_h * ch.se_sg, ch.prop_sg)

    outcomes = []
    for k, t in enumerate(tasks):
        uh, hs = beta_uh[t.id], beta_hs[t.id]
        if hs:
            placement = PLACE_MCC
            breakdown = DelayBreakdown(
                tau_ih[t.id], tau_hs + tau_sg, 0.0, tau_ih[t.id] + tau_hs + tau_sg
            )
        elif uh:
            placement = PLACE_MEC
            breakdown = DelayBreakdown(
                tau_ih[t.id], 0.0, tau_h[k], tau_ih[t.id] + tau_h[k]
            )
        else:
            placement = PLACE_LOCAL
            breakdown = DelayBreakdown(0.0, 0.0, tau_local[k], tau_local[k])
        q = quote_by_id[t.id]
        outcomes.append(
            TaskOutcome(
                task_id=t.id, payload_class=t.payload_class, d=t.d, mu=t.mu,
                tau_max=t.tau_max, placement=placement,
                deadline_miss=breakdown.total > t.tau_max,
                beta_uh=uh, beta_hs=hs,
                price_mec=q.c_mec, price_mcc=q.c_mcc,
                mec_bounds=q.mec_bounds, mcc_bounds=q.mcc_bounds,
                rho=rho[t.id], tau_local=tau_local[k], tau_h=tau_h[k],
                tau_ih_pricing=tau_ih0[k], delays=breakdown,
            )
        )

    tier = cost.tier_costs(
        betas_uh=[beta_uh[t.id] for t in tasks],
        betas_hs=[beta_hs[t.id] for t in tasks],
        tau_local=tau_local,
        tau_ih=[tau_ih[t.id] for t in tasks],
        tau_h=tau_h,
        tau_hs=tau_hs,
        tau_sg=tau_sg,
        rhos=[rho[t.id] for t in tasks],
        rho_B=feeder.rho_B,
        B_u=r.B_u,
        B_h=r.B_h,
        c_tau=c.c_tau,
        c_Bu=c.c_Bu,
        c_Bh=c.c_Bh,
        prices_mec=[quote_by_id[t.id].c_mec for t in tasks],
        prices_mcc=[quote_by_id[t.id].c_mcc for t in tasks],
    )
    return SnapshotReport(
        method="",
        seed=scenario.seed,
        c_tau=c.c_tau,
        outcomes=tuple(outcomes),
        rho_b=feeder.rho_B,
        eta_access=access.eta,
        eta_bounds=(None if access.eta_min is None else (access.eta_min, access.eta_max)),
        tier=tier,
        pruning=tuple(access.pruned) + tuple(feeder.pruned),
        tau_hs=tau_hs,
        tau_sg=tau_sg,
        pricing_tau_hs=est_hs,
        pricing_tau_sg=est_sg,
    )


def _run_with_policy(
    scenario: Scenario,
    tasks: Sequence[Task],
    ch: _Channels,
    fixed_prices: Optional[tuple[float, float]],
    bw_opt: bool,
) -> SnapshotReport:
    """Resolve the HAPS compute-share policy, then run the pipeline.

    The static policy splits the edge CPU across all GDs. The alternative
    splits it across tasks actually computed at the edge, found by a short
    fixed-point iteration.
    """
    n_active = len(tasks)
    report = None
    for _ in range(20):
        f_h = scenario.compute.F_h / max(1, n_active)
        report = _run_pipeline(scenario, tasks, ch, f_h, fixed_prices, bw_opt)
        if scenario.compute.haps_share_policy != SHARE_POLICY_COMPUTED:
            break
        n_mec = sum(1 for o in report.outcomes if o.placement == PLACE_MEC)
        if n_mec == n_active:
            break
        n_active = max(1, n_mec)
    return report


def run_snapshot(scenario: Scenario, tasks: Sequence[Task], method: str = METHOD_PROPOSED) -> SnapshotReport:
    """Run one frozen snapshot under the given method. Deterministic: the
    channel draw is seeded from the scenario seed alone."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    validate_scenario(scenario)
    if not tasks:
        raise ValueError("tasks must be nonempty")
    ch = _draw_channels(scenario)
    if method == METHOD_PROPOSED:
        report = _run_with_policy(scenario, tasks, ch, None, bw_opt=True)
    elif method == METHOD_NO_BW_OPT:
        report = _run_with_policy(scenario, tasks, ch, None, bw_opt=False)
    else:
        base = _run_with_policy(scenario, tasks, ch, None, bw_opt=True)
        fixed = (
            max(o.price_mec for o in base.outcomes),
            max(o.price_mcc for o in base.outcomes),
        )
        report = _run_with_policy(scenario, tasks, ch, fixed, bw_opt=True)
    return replace(report, method=method)


def tasks_for_snapshot(scenario: Scenario) -> list[Task]:
    """Generate the task set a snapshot seed implies."""
    rng = np.random.default_rng([int(scenario.seed), 0])
    return generate_tasks(list(scenario.classes), scenario.n_gds, rng)


def _aggregate(c_tau: float, method: str, reports: list[SnapshotReport]) -> SweepCell:
    tiers = {
        "gd": [rep.tier.real_gd_total for rep in reports],
        "mec": [rep.tier.real_mec for rep in reports],
        "mcc": [rep.tier.real_mcc for rep in reports],
    }
    mean = {k: float(np.mean(v)) for k, v in tiers.items()}
    std = {k: float(np.std(v)) for k, v in tiers.items()}
    counts: dict[tuple[str, str], int] = {}
    totals: dict[str, int] = {}
    for rep in reports:
        for o in rep.outcomes:
            totals[o.payload_class] = totals.get(o.payload_class, 0) + 1
            key = (o.payload_class, o.placement)
            counts[key] = counts.get(key, 0) + 1
    classes = sorted({o.payload_class for rep in reports for o in rep.outcomes})
    fractions = {
        (cls, place): (counts.get((cls, place), 0) / totals[cls] if totals.get(cls) else 0.0)
        for cls in classes
        for place in (PLACE_LOCAL, PLACE_MEC, PLACE_MCC)
    }
    offload = float(np.mean([rep.n_offloaded for rep in reports]))
    return SweepCell(c_tau, method, mean, std, fractions, offload)


def run_sweep(
    scenario: Scenario,
    c_tau_grid: Sequence[float],
    n_snapshots: int,
    methods: Sequence[str] = METHODS,
) -> SweepResult:
    """Sweep the delay price over a grid, averaging each method over the
    same seed list (seed, seed+1, ...) so comparisons are paired."""
    if not c_tau_grid:
        raise ValueError("c_tau_grid must be nonempty")
    if n_snapshots < 1:
        raise ValueError("n_snapshots must be >= 1")
    validate_scenario(scenario)
    cells = []
    all_reports = []
    for c_tau in c_tau_grid:
        per_method: dict[str, list[SnapshotReport]] = {m: [] for m in methods}
        for k in range(n_snapshots):
            scn = scenario.with_cost(c_tau=c_tau).with_seed(scenario.seed + k)
            tasks = tasks_for_snapshot(scn)
            for m in methods:
                rep = run_snapshot(scn, tasks, m)
                per_method[m].append(rep)
                all_reports.append(rep)
        for m in methods:
            cells.append(_aggregate(c_tau, m, per_method[m]))
    return SweepResult(
        tuple(float(x) for x in c_tau_grid),
        tuple(methods),
        n_snapshots,
        scenario.seed,
        tuple(cells),
        tuple(all_reports),
    )
