"""Link gains and achievable rates.

Three link families:

* GD to HAPS access: air-to-ground pathloss with a line-of-sight/non-LoS
  excess-loss draw, times a Rician fading gain collected by a maximum
  ratio combiner over the HAPS array.
* HAPS to LEO and LEO to gateway: deterministic LoS-MIMO gains.

Transmit power scales with the allocated bandwidth share (constant power
spectral density), so the per-Hz SNR is share independent and the rate is
linear in the share.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scenario import AtgEnvironment, Position3D, Scenario, SPEED_OF_LIGHT

LINK_HAPS_LEO = "haps_leo"
LINK_LEO_GW = "leo_gw"


@dataclass(frozen=True)
class AccessLinkState:
    """Frozen per-snapshot GD-to-HAPS channel draw."""

    gd_id: int
    gain: float  # linear power gain, pathloss times combiner gain
    psd_snr: float  # gain * (power per Hz) / N0
    spectral_eff: float  # log2(1 + psd_snr), bits/s/Hz


@dataclass(frozen=True)
class FeederLinkState:
    link: str
    gain: float
    psd_snr: float
    spectral_eff: float


def los_probability(elevation_deg: float, env: AtgEnvironment) -> float:
    """Line-of-sight probability as a logistic curve in the elevation angle."""
    return 1.0 / (1.0 + env.a * math.exp(-env.b * (elevation_deg - env.a)))


def elevation_deg(ground: Position3D, airborne: Position3D) -> float:
    dist = ground.distance_to(airborne)
    return math.degrees(math.asin((airborne.z - ground.z) / dist))


def atg_pathloss(
    gd_pos: Position3D,
    haps_pos: Position3D,
    carrier_hz: float,
    env: AtgEnvironment,
    rng: np.random.Generator,
) -> float:
    """Air-to-ground channel gain: free space loss plus an excess loss of
    eta_los or eta_nlos dB, the branch drawn with probability P_LoS(theta).
    Returns the inverse of the total loss as a linear gain."""
    dist = gd_pos.distance_to(haps_pos)
    fspl = (4.0 * math.pi * dist * carrier_hz / SPEED_OF_LIGHT) ** 2
    p_los = los_probability(elevation_deg(gd_pos, haps_pos), env)
    eta_db = env.eta_los_db if rng.random() < p_los else env.eta_nlos_db
    return 1.0 / (fspl * 10.0 ** (eta_db / 10.0))


def rician_mrc_gain(n_elements: int, K: float, rng: np.random.Generator) -> float:
    """Squared norm of an n-element Rician channel vector.

    Each element is sqrt(K/(K+1)) plus sqrt(1/(K+1)) times a standard
    complex Gaussian; the LoS phase is zero. For K -> infinity the gain
    tends to n_elements; for K = 0 the mean gain is n_elements.
    """
    if n_elements < 1:
        raise ValueError("n_elements must be >= 1")
    if K < 0:
        raise ValueError("K must be >= 0")
    w = (rng.standard_normal(n_elements) + 1j * rng.standard_normal(n_elements)) / math.sqrt(2.0)
    if K >= 1e12:
        return float(n_elements)
    los = math.sqrt(K / (K + 1.0))
    scatter_scale = math.sqrt(1.0 / (K + 1.0))
    h = los + scatter_scale * w
    return float(np.sum(np.abs(h) ** 2))


def los_mimo_gain(
    M_j: int,
    M_k: int,
    wavelength: float,
    G_atm: float,
    pos_j: Position3D,
    pos_k: Position3D,
) -> float:
    """Deterministic LoS-MIMO array gain M_j*M_k*(lambda*G/(4*pi*d))^2."""
    dist = pos_j.distance_to(pos_k)
    return M_j * M_k * (wavelength * G_atm / (4.0 * math.pi * dist)) ** 2


def link_rate(rho: float, B_total: float, psd_snr: float) -> float:
    """Achievable rate rho*B*log2(1+psd_snr); linear in rho under constant
    power spectral density. Zero share gives zero rate."""
    if not (0.0 <= rho <= 1.0):
        raise ValueError("rho must lie in [0, 1]")
    if B_total <= 0:
        raise ValueError("B_total must be > 0")
    if rho == 0.0:
        return 0.0
    return rho * B_total * math.log2(1.0 + psd_snr)


def draw_access_states(scenario: Scenario, rng: np.random.Generator) -> list[AccessLinkState]:
    """Draw the per-GD access channels once for a snapshot and freeze them."""
    r = scenario.radio
    states = []
    for gd in scenario.gds:
        pl = atg_pathloss(gd.pos, scenario.haps_pos, r.f_c_access, r.atg_env, rng)
        fading = rician_mrc_gain(r.M_h_d, r.rician_K, rng)
        gain = pl * fading
        psd_snr = gain * r.psd_gd / r.N0
        states.append(
            AccessLinkState(gd.id, gain, psd_snr, math.log2(1.0 + psd_snr))
        )
    return states


def feeder_states(scenario: Scenario) -> tuple[FeederLinkState, FeederLinkState]:
    """Deterministic HAPS-LEO and LEO-GW link states."""
    r = scenario.radio
    lam = r.wavelength_feeder
    g_hs = los_mimo_gain(r.M_h_u, r.M_s, lam, r.G_atm, scenario.haps_pos, scenario.leo_pos)
    g_sg = los_mimo_gain(r.M_s, r.M_g, lam, r.G_atm, scenario.leo_pos, scenario.gw_pos)
    snr_hs = g_hs * r.psd_haps / r.N0
    snr_sg = g_sg * r.psd_leo / r.N0
    return (
        FeederLinkState(LINK_HAPS_LEO, g_hs, snr_hs, math.log2(1.0 + snr_hs)),
        FeederLinkState(LINK_LEO_GW, g_sg, snr_sg, math.log2(1.0 + snr_sg)),
    )
