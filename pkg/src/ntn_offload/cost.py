"""Per-tier cost and utility functions, their decomposition, and the
"real cost" variants with every delay-priced term removed.

Sign convention: positive values are costs, negative values are utility.
Bandwidth and computing payments appear with opposite signs at the payer
and the payee, so real costs cancel to zero across the three tiers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


class InconsistentOffloadFlags(ValueError):
    """A task was marked cloud-offloaded without reaching the HAPS first."""


@dataclass(frozen=True)
class TierCosts:
    gd_costs: tuple[float, ...]
    mec_cost: float
    mcc_cost: float
    mec_loc_partial: float
    mec_mcc_partial: float
    real_gd: tuple[float, ...]
    real_mec: float
    real_mcc: float

    @property
    def gd_total(self) -> float:
        return float(sum(self.gd_costs))

    @property
    def real_gd_total(self) -> float:
        return float(sum(self.real_gd))


def _check_flags(betas_uh: Sequence[int], betas_hs: Sequence[int]) -> None:
    for i, (uh, hs) in enumerate(zip(betas_uh, betas_hs)):
        if hs and not uh:
            raise InconsistentOffloadFlags(
                f"task index {i}: cloud offload requires HAPS offload first"
            )


def gd_cost(
    beta_uh: int,
    tau_local: float,
    tau_ih: float,
    rho_i: float,
    B_u: float,
    c_tau: float,
    c_Bu: float,
    c_mec: float,
) -> float:
    """Cost paid by one GD: local delay cost, or transmission delay cost
    plus the bandwidth and edge-computing payments when offloading."""
    if beta_uh:
        return c_tau * tau_ih + c_Bu * rho_i * B_u + c_mec
    return c_tau * tau_local


def gd_cost_real(beta_uh: int, rho_i: float, B_u: float, c_Bu: float, c_mec: float) -> float:
    return c_Bu * rho_i * B_u + c_mec if beta_uh else 0.0


def mec_cost(
    betas_uh: Sequence[int],
    betas_hs: Sequence[int],
    tau_h: Sequence[float],
    tau_hs: float,
    tau_sg: float,
    rhos: Sequence[float],
    rho_B: float,
    B_u: float,
    B_h: float,
    c_tau: float,
    c_Bu: float,
    c_Bh: float,
    prices_mec: Sequence[float],
    prices_mcc: Sequence[float],
) -> float:
    """Net cost at the HAPS: feeder bandwidth bought, minus payments
    collected from GDs, plus edge compute delay for tasks it keeps, plus
    feeder delay and cloud payments for tasks it forwards."""
    _check_flags(betas_uh, betas_hs)
    total = c_Bh * rho_B * B_h
    for uh, hs, th, rho, p_mec, p_mcc in zip(
        betas_uh, betas_hs, tau_h, rhos, prices_mec, prices_mcc
    ):
        if uh:
            total -= c_Bu * rho * B_u + p_mec
        total += (uh - hs) * c_tau * th
        if hs:
            total += c_tau * (tau_hs + tau_sg) + p_mcc
    return total


def mcc_cost(
    betas_hs: Sequence[int],
    rho_B: float,
    B_h: float,
    c_Bh: float,
    prices_mcc: Sequence[float],
) -> float:
    """Cloud-side utility: bandwidth and computing payments received."""
    total = -c_Bh * rho_B * B_h
    for hs, p in zip(betas_hs, prices_mcc):
        if hs:
            total -= p
    return total


def mec_partials(
    betas_uh: Sequence[int],
    betas_hs: Sequence[int],
    tau_h: Sequence[float],
    tau_hs: float,
    tau_sg: float,
    rhos: Sequence[float],
    rho_B: float,
    B_u: float,
    B_h: float,
    c_tau: float,
    c_Bu: float,
    c_Bh: float,
    prices_mec: Sequence[float],
    prices_mcc: Sequence[float],
) -> tuple[float, float]:
    """Split the HAPS cost into its two game interfaces.

    The GD-facing partial collects edge compute delay minus GD payments;
    the cloud-facing partial collects the feeder bandwidth plus, per
    forwarded task, the feeder delay net of the saved compute delay plus
    the cloud price. The two partials sum exactly to mec_cost.
    """
    _check_flags(betas_uh, betas_hs)
    loc = 0.0
    mcc_side = c_Bh * rho_B * B_h
    for uh, hs, th, rho, p_mec, p_mcc in zip(
        betas_uh, betas_hs, tau_h, rhos, prices_mec, prices_mcc
    ):
        if uh:
            loc += c_tau * th - c_Bu * rho * B_u - p_mec
        if hs:
            mcc_side += c_tau * (tau_hs + tau_sg - th) + p_mcc
    return loc, mcc_side


def tier_costs(
    betas_uh: Sequence[int],
    betas_hs: Sequence[int],
    tau_local: Sequence[float],
    tau_ih: Sequence[float],
    tau_h: Sequence[float],
    tau_hs: float,
    tau_sg: float,
    rhos: Sequence[float],
    rho_B: float,
    B_u: float,
    B_h: float,
    c_tau: float,
    c_Bu: float,
    c_Bh: float,
    prices_mec: Sequence[float],
    prices_mcc: Sequence[float],
) -> TierCosts:
    gd = tuple(
        gd_cost(uh, tl, ti, rho, B_u, c_tau, c_Bu, p)
        for uh, tl, ti, rho, p in zip(betas_uh, tau_local, tau_ih, rhos, prices_mec)
    )
    real_gd = tuple(
        gd_cost_real(uh, rho, B_u, c_Bu, p)
        for uh, rho, p in zip(betas_uh, rhos, prices_mec)
    )
    mec = mec_cost(
        betas_uh, betas_hs, tau_h, tau_hs, tau_sg, rhos, rho_B,
        B_u, B_h, c_tau, c_Bu, c_Bh, prices_mec, prices_mcc,
    )
    mcc = mcc_cost(betas_hs, rho_B, B_h, c_Bh, prices_mcc)
    loc_part, mcc_part = mec_partials(
        betas_uh, betas_hs, tau_h, tau_hs, tau_sg, rhos, rho_B,
        B_u, B_h, c_tau, c_Bu, c_Bh, prices_mec, prices_mcc,
    )
    real_mec = c_Bh * rho_B * B_h
    real_mcc = -c_Bh * rho_B * B_h
    for uh, hs, rho, p_mec, p_mcc in zip(betas_uh, betas_hs, rhos, prices_mec, prices_mcc):
        if uh:
            real_mec -= c_Bu * rho * B_u + p_mec
        if hs:
            real_mec += p_mcc
            real_mcc -= p_mcc
    return TierCosts(gd, mec, mcc, loc_part, mcc_part, real_gd, real_mec, real_mcc)
