"""Transmission, propagation and computing delays."""
from __future__ import annotations

from dataclasses import dataclass

from .scenario import Position3D, SPEED_OF_LIGHT


class ZeroRate(ValueError):
    """Raised when bits must move over a zero-rate link."""


@dataclass(frozen=True)
class DelayBreakdown:
    tx_access: float  # GD to HAPS transmission, s
    tx_feeder: float  # both feeder hops incl. round-trip propagation, s
    compute: float  # computing delay at the executing node, s
    total: float


def propagation_delay(pos_a: Position3D, pos_b: Position3D) -> float:
    """One-way straight-line propagation delay in seconds."""
    return pos_a.distance_to(pos_b) / SPEED_OF_LIGHT


def access_tx_delay(d_bits: float, rate: float) -> float:
    """Time to push d bits through the access link at the given rate."""
    if d_bits == 0:
        return 0.0
    if rate <= 0:
        raise ZeroRate("cannot transmit over a zero-rate access link")
    return d_bits / rate


def feeder_hop_delay(bits_sum: float, rate: float, prop_one_way: float) -> float:
    """One feeder hop: shared transmission time of all relayed bits plus the
    round-trip propagation of the hop."""
    if bits_sum == 0:
        return 2.0 * prop_one_way
    if rate <= 0:
        raise ZeroRate("cannot relay bits over a zero-rate feeder link")
    return bits_sum / rate + 2.0 * prop_one_way


def feeder_delay(
    bits_sum: float, rate_hs: float, rate_sg: float, prop_hs: float, prop_sg: float
) -> float:
    """Total HAPS-LEO-GW delay: both hops, each charged the full shared
    transmission time and its own round-trip propagation."""
    return feeder_hop_delay(bits_sum, rate_hs, prop_hs) + feeder_hop_delay(
        bits_sum, rate_sg, prop_sg
    )


def compute_delay(d_bits: float, mu: float, cpu_hz: float) -> float:
    """Computing delay d*mu/f. Cloud execution is modeled as zero delay by
    the orchestrator and never calls this."""
    if cpu_hz <= 0:
        raise ValueError("cpu_hz must be > 0")
    return d_bits * mu / cpu_hz
