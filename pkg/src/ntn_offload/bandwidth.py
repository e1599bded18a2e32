"""Bandwidth allocation for the feeder chain and the shared access channel.

Both problems reduce to convex single-share costs of the form a/rho + b*rho
(delay cost shrinks with the share, bandwidth payment grows with it), with
the unconstrained optimum at sqrt(a/b).

The feeder allocator picks one share for the HAPS-LEO-GW chain after
pruning relayed tasks that bust the budget or the deadlines. The access
allocator splits the shared GD channel at a min-max fair point: the lowest
cost cap eta such that every survivor can stay at or below eta within the
unit bandwidth budget, located by bisection, with two pruning passes first.

Pruning ties break on the lowest task id so runs are deterministic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence


class ZeroSpectralEfficiency(ValueError):
    """A link with zero spectral efficiency cannot carry bits."""


class InfeasibleBudget(Exception):
    """The cost budget cannot cover even the minimum a/rho + b*rho cost."""


@dataclass(frozen=True)
class PruneEvent:
    task_id: int
    stage: str
    reason: str


@dataclass(frozen=True)
class FeederCandidate:
    """A task the HAPS wants to relay to the cloud."""

    task_id: int
    d: float  # bits
    tau_max: float
    tau_ih: float  # access transmission delay at the final GD share
    tau_h: float  # edge compute delay the relay would save
    price_mcc: float


@dataclass(frozen=True)
class AccessCandidate:
    """A task a GD wants to push up to the HAPS."""

    task_id: int
    d: float
    tau_max: float
    tau_h: float  # edge compute delay after arrival
    tau_local: float  # local compute delay if kept
    spectral_eff: float  # access link, bits/s/Hz
    price_mec: float


@dataclass(frozen=True)
class FeederAllocation:
    rho_B: float
    kept_ids: tuple[int, ...]
    pruned: tuple[PruneEvent, ...]
    recip_coeff: float  # a term of the realized a/rho + b*rho cost
    linear_coeff: float
    budget: float


@dataclass(frozen=True)
class AccessAllocation:
    shares: dict[int, float]
    eta: Optional[float]  # realized cost cap; None when nothing survived
    eta_min: Optional[float]
    eta_max: Optional[float]
    kept_ids: tuple[int, ...]
    pruned: tuple[PruneEvent, ...]


def unconstrained_opt_share(a: float, b: float) -> float:
    """Minimizer of a/rho + b*rho over rho > 0."""
    if b <= 0:
        raise ValueError("b must be > 0")
    if a < 0:
        raise ValueError("a must be >= 0")
    return math.sqrt(a / b)


def quadratic_interval(a: float, b: float, budget: float) -> tuple[float, float]:
    """Share interval on which a/rho + b*rho <= budget.

    Solves b*rho^2 - budget*rho + a <= 0. Raises InfeasibleBudget when the
    budget sits below the minimum attainable cost 2*sqrt(a*b).
    """
    if b <= 0:
        raise ValueError("b must be > 0")
    if a < 0:
        raise ValueError("a must be >= 0")
    if budget < 2.0 * math.sqrt(a * b):
        raise InfeasibleBudget(
            f"budget {budget} below minimum cost {2.0 * math.sqrt(a * b)}"
        )
    disc = max(budget * budget - 4.0 * a * b, 0.0)
    root = math.sqrt(disc)
    s = budget + root
    lo = 2.0 * a / s if s > 0.0 else 0.0
    hi = s / (2.0 * b)
    return lo, hi


def feeder_coefficients(
    ds: Sequence[float],
    B_h: float,
    se_hs: float,
    se_sg: float,
    c_tau: float,
    c_Bh: float,
) -> tuple[float, float]:
    """Coefficients of the feeder cost a/rho_B + b*rho_B.

    Every relayed task waits for the whole batch on both hops, so the delay
    term carries the set size times the summed bits.
    """
    if se_hs <= 0 or se_sg <= 0:
        raise ZeroSpectralEfficiency("feeder spectral efficiency must be > 0")
    count = len(ds)
    a = c_tau * count * (sum(ds) / B_h) * (1.0 / se_hs + 1.0 / se_sg)
    return a, c_Bh * B_h


def access_coefficients(
    d: float, B_u: float, se: float, c_tau: float, c_Bu: float
) -> tuple[float, float]:
    """Coefficients of one GD's access cost a/rho_i + b*rho_i."""
    if se <= 0:
        raise ZeroSpectralEfficiency("access spectral efficiency must be > 0")
    return c_tau * d / (B_u * se), c_Bu * B_u


def _argmin_id(items, key) -> int:
    """Index of the minimum key; ties go to the lowest task id."""
    best = min(range(len(items)), key=lambda k: (key(items[k]), items[k].task_id))
    return best


def _fullband_tx_time(ds: Sequence[float], B_h: float, se_hs: float, se_sg: float) -> float:
    return (sum(ds) / B_h) * (1.0 / se_hs + 1.0 / se_sg)


def allocate_feeder(
    candidates: Sequence[FeederCandidate],
    B_h: float,
    se_hs: float,
    se_sg: float,
    prop_hs: float,
    prop_sg: float,
    c_tau: float,
    c_Bh: float,
) -> FeederAllocation:
    """Pick the HAPS-LEO-GW bandwidth share and the surviving relay set.

    Pass one drops the task with the smallest compute-delay-minus-price
    margin until the budget covers the minimum cost; pass two drops the
    task with the least deadline headroom until the share bounds close;
    then the share is the unconstrained optimum clipped into the bounds,
    capped at the whole link.
    """
    if se_hs <= 0 or se_sg <= 0:
        raise ZeroSpectralEfficiency("feeder spectral efficiency must be > 0")
    kept = list(candidates)
    pruned: list[PruneEvent] = []
    b = c_Bh * B_h
    round_trips = 2.0 * (prop_hs + prop_sg)

    def coeff(sub):
        return c_tau * len(sub) * _fullband_tx_time([c.d for c in sub], B_h, se_hs, se_sg)

    def budget(sub):
        return sum(c_tau * c.tau_h - c.price_mcc for c in sub)

    # Pass one: restore budget feasibility.
    while kept and budget(kept) < 2.0 * math.sqrt(coeff(kept) * b):
        k = _argmin_id(kept, lambda c: c_tau * c.tau_h - c.price_mcc)
        pruned.append(PruneEvent(kept[k].task_id, "feeder_budget", "cost budget below minimum relay cost"))
        del kept[k]

    def bounds(sub):
        a = coeff(sub)
        sigma = budget(sub)
        tx_time = _fullband_tx_time([c.d for c in sub], B_h, se_hs, se_sg)
        head = min(c.tau_max - c.tau_ih - round_trips for c in sub)
        rho1 = tx_time / head if head > 0 else math.inf
        disc = sigma * sigma - 4.0 * a * b
        if disc < 0:
            return None
        s = sigma + math.sqrt(disc)
        rho2 = (2.0 * a / s) if s > 0 else (0.0 if a == 0.0 else math.inf)
        rho_hi = s / (2.0 * b) if b > 0 else math.inf
        return max(rho1, rho2), rho_hi

    # Pass two: restore share-bound feasibility.
    while kept:
        bd = bounds(kept)
        if bd is not None and bd[0] <= 1.0 and bd[0] <= bd[1]:
            break
        k = _argmin_id(kept, lambda c: c.tau_max - c.tau_ih)
        pruned.append(PruneEvent(kept[k].task_id, "feeder_deadline", "share bounds exceed the link"))
        del kept[k]

    if not kept:
        return FeederAllocation(0.0, (), tuple(pruned), 0.0, b, 0.0)

    a = coeff(kept)
    sigma = budget(kept)
    lo, hi = bounds(kept)
    hi = min(hi, 1.0)
    if a == 0.0:
        rho_star = 0.0
    elif b > 0.0:
        rho_star = math.sqrt(a / b)
    else:
        rho_star = math.inf
    rho_B = min(max(rho_star, lo), hi)
    return FeederAllocation(rho_B, tuple(c.task_id for c in kept), tuple(pruned), a, b, sigma)


def share_envelope(
    eta: float,
    recip_coeffs: Sequence[float],
    linear_coeff: float,
    floor_shares: Sequence[float],
) -> Optional[tuple[list[float], list[float]]]:
    """Per-task feasible share interval at cost cap eta.

    Returns (lowest, highest) shares keeping each task at cost <= eta while
    honoring its deadline floor and the unit box, or None when some task
    cannot meet the cap at all.
    """
    lows, highs = [], []
    for a, floor in zip(recip_coeffs, floor_shares):
        disc = eta * eta - 4.0 * a * linear_coeff
        if disc < 0.0:
            return None
        s = eta + math.sqrt(disc)
        rho2 = (2.0 * a / s) if s > 0.0 else (0.0 if a == 0.0 else math.inf)
        rho_hi = s / (2.0 * linear_coeff) if linear_coeff > 0.0 else math.inf
        lo = max(floor, rho2)
        hi = min(1.0, rho_hi)
        if lo > hi:
            return None
        lows.append(lo)
        highs.append(hi)
    return lows, highs


def access_cap_feasible(
    eta: float,
    recip_coeffs: Sequence[float],
    linear_coeff: float,
    floor_shares: Sequence[float],
) -> bool:
    """True when every task can sit at or below cost eta and the minimal
    such shares fit in the unit budget. Monotone nondecreasing in eta."""
    env = share_envelope(eta, recip_coeffs, linear_coeff, floor_shares)
    return env is not None and sum(env[0]) <= 1.0


def allocate_access(
    candidates: Sequence[AccessCandidate],
    B_u: float,
    c_tau: float,
    c_Bu: float,
    n_bisect: int = 40,
) -> AccessAllocation:
    """Split the shared access channel among offloading GDs.

    Pass one drops the task with the least deadline headroom until the
    deadline floors fit in the channel; pass two drops the task with the
    smallest compute-delay-minus-price margin until the cost cap range is
    workable; bisection then finds the lowest feasible cap. Survivors get
    their minimal cap-meeting shares, and any slack is granted toward the
    individually optimal shares without exceeding the channel.
    """
    kept = list(candidates)
    pruned: list[PruneEvent] = []
    b = c_Bu * B_u

    def tx_unit(c):
        # Access transmission time at full bandwidth.
        if c.spectral_eff <= 0:
            raise ZeroSpectralEfficiency(f"task {c.task_id}: access spectral efficiency must be > 0")
        return c.d / (B_u * c.spectral_eff)

    def floor_share(c):
        head = c.tau_max - c.tau_h
        return tx_unit(c) / head if head > 0 else math.inf

    # Pass one: deadline floors must fit the channel.
    while kept and sum(floor_share(c) for c in kept) > 1.0:
        k = _argmin_id(kept, lambda c: c.tau_max - c.tau_h)
        pruned.append(PruneEvent(kept[k].task_id, "access_deadline", "deadline floors exceed the channel"))
        del kept[k]

    def cap_range(sub):
        eta_min = 2.0 * max(math.sqrt(c_tau * tx_unit(c) * b) for c in sub)
        eta_max = min(c_tau * c.tau_local - c.price_mec for c in sub)
        return eta_min, eta_max

    def feasible_at(sub, eta):
        recip = [c_tau * tx_unit(c) for c in sub]
        floors = [floor_share(c) for c in sub]
        return access_cap_feasible(eta, recip, b, floors)

    # Pass two: the top of the cap range must itself be feasible.
    while kept:
        eta_min, eta_max = cap_range(kept)
        if eta_min <= eta_max and feasible_at(kept, eta_max):
            break
        k = _argmin_id(kept, lambda c: c_tau * c.tau_h - c.price_mec)
        pruned.append(PruneEvent(kept[k].task_id, "access_budget", "cost cap range is unworkable"))
        del kept[k]

    if not kept:
        return AccessAllocation({}, None, None, None, (), tuple(pruned))

    eta_min, eta_max = cap_range(kept)
    recip = [c_tau * tx_unit(c) for c in kept]
    floors = [floor_share(c) for c in kept]

    if access_cap_feasible(eta_min, recip, b, floors):
        eta_star = eta_min
    else:
        lo, hi = eta_min, eta_max
        for _ in range(max(1, n_bisect)):
            mid = 0.5 * (lo + hi)
            if access_cap_feasible(mid, recip, b, floors):
                hi = mid
            else:
                lo = mid
        eta_star = hi

    lows, highs = share_envelope(eta_star, recip, b, floors)
    ideals = []
    for a, lo_i, hi_i in zip(recip, lows, highs):
        star = math.sqrt(a / b) if b > 0.0 else math.inf
        ideals.append(min(max(star, lo_i), hi_i))
    slack = max(0.0, 1.0 - sum(lows))
    want = [ideal - lo_i for ideal, lo_i in zip(ideals, lows)]
    total_want = sum(want)
    if total_want <= slack:
        shares = list(ideals)
    else:
        scale = slack / total_want if total_want > 0.0 else 0.0
        shares = [lo_i + w * scale for lo_i, w in zip(lows, want)]

    return AccessAllocation(
        {c.task_id: s for c, s in zip(kept, shares)},
        eta_star,
        eta_min,
        eta_max,
        tuple(c.task_id for c in kept),
        tuple(pruned),
    )
