"""Backward-induction price setting and the marginal offloading decisions.

Two leader/follower exchanges are resolved per task:

* cloud vs HAPS: the cloud quotes a computing price just under the edge
  compute delay cost it saves the HAPS, capped by the task deadline;
* HAPS vs GD: the HAPS quotes a price just under the local-minus-transmit
  delay cost it saves the GD, again capped by the deadline.

Strict inequalities are realized by shaving the profit-extraction bound by
a multiplicative margin eps; the deadline-derived bound stays exact. All
prices clamp at zero. Followers then take the cost-minimizing branch.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .delay import feeder_hop_delay
from .scenario import Task


@dataclass(frozen=True)
class PriceQuote:
    task_id: int
    c_mcc: float
    c_mec: float
    # (profit bound before margin, deadline bound); None when prices were
    # imposed externally rather than quoted by the policy.
    mcc_bounds: Optional[tuple[float, float]]
    mec_bounds: Optional[tuple[float, float]]
    mcc_delay_critical: bool = False
    mec_delay_critical: bool = False


@dataclass(frozen=True)
class OffloadDecision:
    task_id: int
    beta_uh: int
    beta_hs: int


@dataclass(frozen=True)
class FeederContext:
    """Feeder-link quantities needed to estimate relay delays during pricing."""

    B_h: float
    se_hs: float  # spectral efficiency HAPS-LEO, bits/s/Hz
    se_sg: float  # spectral efficiency LEO-GW, bits/s/Hz
    prop_hs: float  # one-way propagation, s
    prop_sg: float
    rho_B: float = 1.0

    def hop_delays(self, bits_sum: float) -> tuple[float, float]:
        r_hs = self.rho_B * self.B_h * self.se_hs
        r_sg = self.rho_B * self.B_h * self.se_sg
        return (
            feeder_hop_delay(bits_sum, r_hs, self.prop_hs),
            feeder_hop_delay(bits_sum, r_sg, self.prop_sg),
        )


def mcc_price(
    tau_h: float,
    tau_hs: float,
    tau_sg: float,
    tau_ih: float,
    tau_max: float,
    c_tau: float,
    eps: float,
) -> tuple[float, tuple[float, float]]:
    """Cloud computing price for one task.

    The profit bound is the edge compute delay cost saved by relaying, the
    deadline bound folds in the task deadline; the quote is the smaller of
    the two, clamped at zero.
    """
    hat = c_tau * max(0.0, tau_h - tau_hs - tau_sg)
    bar = c_tau * (tau_max + tau_h - 2.0 * tau_hs - 2.0 * tau_sg - tau_ih)
    price = max(0.0, min(hat * (1.0 - eps), bar))
    return price, (hat, bar)


def mec_price(
    tau_local: float,
    tau_ih: float,
    tau_h: float,
    rho_i: float,
    B_u: float,
    tau_max: float,
    c_tau: float,
    c_Bu: float,
    eps: float,
) -> tuple[float, tuple[float, float]]:
    """Edge computing price for one task, mirroring the cloud policy."""
    bw = c_Bu * rho_i * B_u
    hat = max(0.0, c_tau * tau_local - c_tau * tau_ih - bw)
    bar = c_tau * (tau_local - tau_h - 2.0 * tau_ih + tau_max) - bw
    price = max(0.0, min(hat * (1.0 - eps), bar))
    return price, (hat, bar)


def haps_offload_decision(
    price_mcc: float, tau_h: float, tau_hs: float, tau_sg: float, c_tau: float
) -> int:
    """Relay to the cloud iff the marginal cloud-side cost is negative."""
    return int(c_tau * (tau_hs + tau_sg - tau_h) + price_mcc < 0.0)


def gd_offload_decision(
    price_mec: float,
    tau_local: float,
    tau_ih: float,
    rho_i: float,
    B_u: float,
    c_tau: float,
    c_Bu: float,
) -> int:
    """Offload iff the offloading branch is strictly cheaper than local."""
    offload = c_tau * tau_ih + c_Bu * rho_i * B_u + price_mec
    return int(offload < c_tau * tau_local)


def solve_pricing_game(
    tasks: Sequence[Task],
    tau_local: Sequence[float],
    tau_h: Sequence[float],
    tau_ih: Sequence[float],
    rhos: Sequence[float],
    feeder: FeederContext,
    B_u: float,
    c_tau: float,
    c_Bu: float,
    eps: float,
    fixed_prices: Optional[tuple[float, float]] = None,
) -> tuple[list[PriceQuote], list[OffloadDecision]]:
    """Resolve both pricing games for a snapshot.

    Stage one quotes edge prices and collects the GD responses; stage two
    estimates relay delays over the resulting candidate set (everything the
    GDs sent up could go on to the cloud) and quotes cloud prices. Cloud
    flags are squashed for tasks that never reached the HAPS. Feasibility
    is not enforced here; the bandwidth allocators prune later.

    With `fixed_prices` = (edge, cloud), the posted quotes are replaced by
    those uniform prices and only the follower responses are recomputed.
    """
    n = len(tasks)
    p_mec = [0.0] * n
    mec_bounds: list[Optional[tuple[float, float]]] = [None] * n
    beta_uh = [0] * n
    for k, task in enumerate(tasks):
        if fixed_prices is None:
            p_mec[k], mec_bounds[k] = mec_price(
                tau_local[k], tau_ih[k], tau_h[k], rhos[k], B_u, task.tau_max, c_tau, c_Bu, eps
            )
        else:
            p_mec[k] = fixed_prices[0]
        beta_uh[k] = gd_offload_decision(
            p_mec[k], tau_local[k], tau_ih[k], rhos[k], B_u, c_tau, c_Bu
        )

    candidate_bits = sum(t.d for t, uh in zip(tasks, beta_uh) if uh)
    tau_hs_est, tau_sg_est = feeder.hop_delays(candidate_bits)

    quotes = []
    decisions = []
    for k, task in enumerate(tasks):
        if fixed_prices is None:
            p_mcc, mcc_b = mcc_price(
                tau_h[k], tau_hs_est, tau_sg_est, tau_ih[k], task.tau_max, c_tau, eps
            )
        else:
            p_mcc, mcc_b = fixed_prices[1], None
        beta_hs = haps_offload_decision(p_mcc, tau_h[k], tau_hs_est, tau_sg_est, c_tau)
        beta_hs *= beta_uh[k]
        quotes.append(
            PriceQuote(
                task_id=task.id,
                c_mcc=p_mcc,
                c_mec=p_mec[k],
                mcc_bounds=mcc_b,
                mec_bounds=mec_bounds[k],
                mcc_delay_critical=bool(mcc_b is not None and mcc_b[1] < 0.0),
                mec_delay_critical=bool(
                    mec_bounds[k] is not None and mec_bounds[k][1] < 0.0
                ),
            )
        )
        decisions.append(OffloadDecision(task.id, beta_uh[k], beta_hs))
    return quotes, decisions
