"""Brute-force verifiers backing the test suite.

These deliberately avoid the closed forms used by the production solvers:
scalar problems fall to dense grids, the min-max split to a bisection on
the cost cap with Newton-refined minimal shares, and the relay-set search
to exhaustive subset enumeration. Slow is fine here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class GridSpec:
    lo: float
    hi: float
    n_points: int

    def __post_init__(self):
        if not (self.lo < self.hi):
            raise ValueError("lo must be < hi")
        if self.n_points < 2:
            raise ValueError("n_points must be >= 2")

    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n_points)


def grid_min_scalar(a: float, b: float, grid: GridSpec) -> tuple[float, float]:
    """Grid argmin of a/rho + b*rho."""
    if b <= 0:
        raise ValueError("b must be > 0")
    rho = grid.points()
    vals = a / rho + b * rho
    k = int(np.argmin(vals))
    return float(rho[k]), float(vals[k])


def _min_share_for_cap(a: float, b: float, cap: float) -> float:
    """Smallest rho with a/rho + b*rho <= cap, or inf when unattainable.

    Newton iteration on b*rho^2 - cap*rho + a from the left root's side;
    monotone and overshoot-free for this convex parabola.
    """
    if a == 0.0:
        return 0.0
    if cap <= 0.0:
        return math.inf
    vertex = cap / (2.0 * b) if b > 0.0 else math.inf
    rho = a / cap
    for _ in range(200):
        f = b * rho * rho - cap * rho + a
        if f <= 0.0:
            break
        fp = 2.0 * b * rho - cap
        if fp >= 0.0:
            return math.inf
        step = -f / fp
        rho += step
        if rho >= vertex:
            return math.inf
        if step <= 1e-17 * rho:
            break
    if a / rho + b * rho > cap * (1.0 + 1e-9):
        return math.inf
    return rho


def grid_minmax_simplex(
    a_vec: Sequence[float],
    b_vec: Sequence[float],
    bounds: Sequence[tuple[float, float]],
    resolution: float = 1e-12,
) -> tuple[list[float], float]:
    """Min-max of per-task costs a_i/rho_i + b_i*rho_i over the unit simplex
    intersected with per-task [lo, hi] boxes.

    Requires sum of the lower bounds <= 1. Searches the optimal cost cap by
    bisection; per-task minimal shares come from the Newton helper above.
    """
    a = [float(x) for x in a_vec]
    b = [float(x) for x in b_vec]
    lo_box = [float(lo) for lo, _ in bounds]
    hi_box = [float(hi) for _, hi in bounds]
    if sum(lo_box) > 1.0 + 1e-12:
        raise ValueError("lower bounds already exceed the budget")

    def cost(i, rho):
        if rho == 0.0:
            return 0.0 if a[i] == 0.0 else math.inf
        return a[i] / rho + b[i] * rho

    def best_in_box(i):
        star = math.sqrt(a[i] / b[i]) if b[i] > 0.0 else math.inf
        return min(max(star, lo_box[i]), hi_box[i])

    def assignment(cap):
        rhos = []
        for i in range(len(a)):
            r = max(lo_box[i], _min_share_for_cap(a[i], b[i], cap))
            if r > hi_box[i] or cost(i, r) > cap * (1.0 + 1e-12):
                return None
            rhos.append(r)
        if sum(rhos) > 1.0:
            return None
        return rhos

    # Bracket: below by each task's box-constrained optimum, above by the
    # cost of a concrete feasible point (lower bounds plus an equal split
    # of the remaining budget).
    n = len(a)
    slack = max(0.0, 1.0 - sum(lo_box))
    fallback = [min(hi_box[i], lo_box[i] + slack / n) for i in range(n)]
    cap_lo = max(cost(i, best_in_box(i)) for i in range(n))
    cap_hi = max(cap_lo, max(cost(i, fallback[i]) for i in range(n)))
    if not math.isfinite(cap_hi):
        raise ValueError("instance admits no finite-cost feasible point")
    if assignment(cap_lo) is not None:
        cap = cap_lo
    else:
        lo, hi = cap_lo, cap_hi
        for _ in range(300):
            mid = 0.5 * (lo + hi)
            if assignment(mid) is not None:
                hi = mid
            else:
                lo = mid
            if hi - lo <= resolution * max(1.0, abs(hi)):
                break
        cap = hi
    rhos = assignment(cap)
    value = max(cost(i, rhos[i]) for i in range(len(a)))
    return rhos, value


def enumerate_offload_subsets(
    items: Sequence,
    evaluate: Callable[[tuple], tuple[bool, float, object]],
) -> tuple[tuple, Optional[float], object]:
    """Evaluate every subset of `items` (the empty one included) with the
    caller's oracle and return the cheapest feasible one.

    `evaluate` maps a subset tuple to (feasible, cost, payload). Intended
    for at most a dozen items.
    """
    if len(items) > 16:
        raise ValueError("subset enumeration capped at 16 items")
    best_subset: tuple = ()
    best_cost: Optional[float] = None
    best_payload: object = None
    for r in range(len(items) + 1):
        for subset in combinations(items, r):
            feasible, cost, payload = evaluate(subset)
            if feasible and (best_cost is None or cost < best_cost):
                best_subset, best_cost, best_payload = subset, cost, payload
    return best_subset, best_cost, best_payload
