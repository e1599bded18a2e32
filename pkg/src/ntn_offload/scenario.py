"""Scenario configuration: domain types, defaults, and validation.

A Scenario freezes everything one simulation snapshot depends on: node
geometry, radio and compute parameters, cost rates, payload class mix and
the RNG seed. Instances are immutable and safe to share across workers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s

# Thermal noise density kT at 290 K, W/Hz.
DEFAULT_NOISE_PSD = 1.380649e-23 * 290.0

PAYLOAD_CLASSES = ("large", "medium", "low")
PLACEMENTS = ("local", "mec", "mcc")

SHARE_POLICY_STATIC = "static_equal"
SHARE_POLICY_COMPUTED = "equal_among_computed"
SHARE_POLICIES = (SHARE_POLICY_STATIC, SHARE_POLICY_COMPUTED)


class ScenarioError(ValueError):
    """Scenario validation failure; `field` names the offending entry."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


class NonPositiveBandwidth(ScenarioError):
    pass


class EmptyGDSet(ScenarioError):
    pass


class CoincidentNodes(ScenarioError):
    pass


class InvalidParameter(ScenarioError):
    pass


@dataclass(frozen=True)
class Position3D:
    """Cartesian position in meters; the ground plane is z = 0."""

    x: float
    y: float
    z: float

    def distance_to(self, other: "Position3D") -> float:
        return math.dist((self.x, self.y, self.z), (other.x, other.y, other.z))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class Task:
    """One computing task: payload size, compute density, deadline."""

    id: int
    d: int  # bits
    mu: float  # CPU cycles per bit
    tau_max: float  # seconds
    payload_class: str

    def __post_init__(self):
        if self.d <= 0:
            raise InvalidParameter(f"task[{self.id}].d", "must be > 0 bits")
        if self.mu <= 0:
            raise InvalidParameter(f"task[{self.id}].mu", "must be > 0")
        if self.tau_max <= 0:
            raise InvalidParameter(f"task[{self.id}].tau_max", "must be > 0")


@dataclass(frozen=True)
class CostParams:
    """Cost rates: delay price per second and bandwidth prices per Hz."""

    c_tau: float = 1e3
    c_Bu: float = 1e-13
    c_Bh: float = 1e-13


@dataclass(frozen=True)
class AtgEnvironment:
    """Air-to-ground excess-loss model constants (urban defaults)."""

    a: float = 9.61
    b: float = 0.16
    eta_los_db: float = 1.0
    eta_nlos_db: float = 20.0


@dataclass(frozen=True)
class RadioParams:
    B_u: float = 1.4e6  # shared GD-HAPS channel bandwidth, Hz
    B_h: float = 100e6  # HAPS-LEO / LEO-GW link bandwidth, Hz
    f_c_access: float = 2.1e9  # S-band carrier, Hz
    f_c_feeder: float = 28e9  # Ka-band carrier, Hz
    N0: float = DEFAULT_NOISE_PSD  # noise power per Hz
    p_i: float = 0.5  # GD transmit power, W
    p_h: float = 2.0  # HAPS transmit power, W
    p_s: float = 1.0  # LEO transmit power, W
    M_h_d: int = 16  # HAPS array elements facing the ground
    M_h_u: int = 2048  # HAPS array elements facing the LEO
    M_s: int = 2048  # LEO array elements
    M_g: int = 4096  # gateway array elements
    rician_K: float = 10.0  # linear Rician factor for the access link
    atg_env: AtgEnvironment = field(default_factory=AtgEnvironment)
    G_atm: float = 1.0  # linear atmospheric loss factor on feeder links
    # Transmit powers are specified over these reference bandwidths; the
    # power spectral density p / B_ref stays constant when shares change.
    psd_ref_bw_access: float = 20e6
    psd_ref_bw_feeder: float = 200e6

    @property
    def wavelength_access(self) -> float:
        return SPEED_OF_LIGHT / self.f_c_access

    @property
    def wavelength_feeder(self) -> float:
        return SPEED_OF_LIGHT / self.f_c_feeder

    @property
    def psd_gd(self) -> float:
        return self.p_i / self.psd_ref_bw_access

    @property
    def psd_haps(self) -> float:
        return self.p_h / self.psd_ref_bw_feeder

    @property
    def psd_leo(self) -> float:
        return self.p_s / self.psd_ref_bw_feeder


@dataclass(frozen=True)
class ComputeParams:
    F_h: float = 10e9  # total HAPS CPU frequency, Hz
    f_local: float = 1e8  # per-GD CPU frequency, Hz
    haps_share_policy: str = SHARE_POLICY_STATIC


@dataclass(frozen=True)
class PayloadClassSpec:
    """Task statistics for one payload class."""

    name: str
    mean_bits: float
    rel_std: float
    mu: float
    tau_max: float
    mix_fraction: float


@dataclass(frozen=True)
class GroundDevice:
    id: int
    pos: Position3D


@dataclass(frozen=True)
class Scenario:
    gds: tuple[GroundDevice, ...]
    haps_pos: Position3D
    leo_pos: Position3D
    gw_pos: Position3D
    radio: RadioParams
    cost: CostParams
    compute: ComputeParams
    classes: tuple[PayloadClassSpec, ...]
    seed: int
    price_margin_eps: float = 1e-3

    @property
    def n_gds(self) -> int:
        return len(self.gds)

    def with_cost(self, **kwargs) -> "Scenario":
        return replace(self, cost=replace(self.cost, **kwargs))

    def with_seed(self, seed: int) -> "Scenario":
        return replace(self, seed=seed)


def place_gds(n_gds: int, radius_m: float, seed: int) -> tuple[GroundDevice, ...]:
    """Scatter GDs uniformly in a disk around the origin, ground level."""
    rng = np.random.default_rng([int(seed), 2])
    r = radius_m * np.sqrt(rng.random(n_gds))
    phi = 2.0 * np.pi * rng.random(n_gds)
    return tuple(
        GroundDevice(i, Position3D(float(r[i] * np.cos(phi[i])), float(r[i] * np.sin(phi[i])), 0.0))
        for i in range(n_gds)
    )


def default_scenario(n_gds: int = 14, seed: int = 1, gd_radius_m: float = 500.0) -> Scenario:
    """Build the stock configuration: 14 GDs under a HAPS at 20 km, a LEO
    relay at 500 km and a ground gateway 10 km away."""
    from .taskgen import default_class_specs

    return validate_scenario(
        Scenario(
            gds=place_gds(n_gds, gd_radius_m, seed),
            haps_pos=Position3D(0.0, 0.0, 20e3),
            leo_pos=Position3D(0.0, 5e3, 500e3),
            gw_pos=Position3D(0.0, 10e3, 0.0),
            radio=RadioParams(),
            cost=CostParams(),
            compute=ComputeParams(),
            classes=tuple(default_class_specs()),
            seed=seed,
        )
    )


def validate_scenario(raw: Scenario) -> Scenario:
    """Check every invariant and return the (frozen) scenario unchanged.

    Idempotent: a valid scenario validates to an identical value.
    """
    if len(raw.gds) < 1:
        raise EmptyGDSet("gds", "at least one ground device is required")

    r = raw.radio
    for name, value in (("radio.B_u", r.B_u), ("radio.B_h", r.B_h)):
        if value <= 0:
            raise NonPositiveBandwidth(name, "bandwidth must be > 0 Hz")
    for name, value in (
        ("radio.f_c_access", r.f_c_access),
        ("radio.f_c_feeder", r.f_c_feeder),
        ("radio.N0", r.N0),
        ("radio.p_i", r.p_i),
        ("radio.p_h", r.p_h),
        ("radio.p_s", r.p_s),
        ("radio.psd_ref_bw_access", r.psd_ref_bw_access),
        ("radio.psd_ref_bw_feeder", r.psd_ref_bw_feeder),
        ("radio.G_atm", r.G_atm),
    ):
        if value <= 0:
            raise InvalidParameter(name, "must be > 0")
    for name, value in (
        ("radio.M_h_d", r.M_h_d),
        ("radio.M_h_u", r.M_h_u),
        ("radio.M_s", r.M_s),
        ("radio.M_g", r.M_g),
    ):
        if int(value) != value or value < 1:
            raise InvalidParameter(name, "antenna count must be an integer >= 1")
    if r.rician_K < 0:
        raise InvalidParameter("radio.rician_K", "must be >= 0")

    c = raw.cost
    for name, value in (("cost.c_tau", c.c_tau), ("cost.c_Bu", c.c_Bu), ("cost.c_Bh", c.c_Bh)):
        if value < 0:
            raise InvalidParameter(name, "must be >= 0")

    comp = raw.compute
    if comp.F_h <= 0:
        raise InvalidParameter("compute.F_h", "must be > 0")
    if comp.f_local <= 0:
        raise InvalidParameter("compute.f_local", "must be > 0")
    if comp.haps_share_policy not in SHARE_POLICIES:
        raise InvalidParameter(
            "compute.haps_share_policy", f"must be one of {SHARE_POLICIES}"
        )

    nodes = [("haps_pos", raw.haps_pos), ("leo_pos", raw.leo_pos), ("gw_pos", raw.gw_pos)]
    nodes += [(f"gds[{g.id}].pos", g.pos) for g in raw.gds]
    for name, pos in nodes:
        if not all(math.isfinite(v) for v in pos.as_tuple()):
            raise InvalidParameter(name, "coordinates must be finite")
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            if nodes[i][1] == nodes[j][1]:
                raise CoincidentNodes(
                    f"{nodes[i][0]}/{nodes[j][0]}", "node positions must be pairwise distinct"
                )

    if not (0.0 < raw.price_margin_eps < 1.0):
        raise InvalidParameter("price_margin_eps", "must lie in (0, 1)")
    if raw.seed < 0 or raw.seed >= 2**64:
        raise InvalidParameter("seed", "must be an unsigned 64-bit integer")

    if len(raw.classes) < 1:
        raise InvalidParameter("classes", "at least one payload class is required")
    mix_total = 0.0
    for spec in raw.classes:
        prefix = f"class.{spec.name}"
        if spec.mean_bits <= 0:
            raise InvalidParameter(f"{prefix}.mean_bits", "must be > 0")
        if spec.rel_std < 0:
            raise InvalidParameter(f"{prefix}.rel_std", "must be >= 0")
        if spec.mu <= 0:
            raise InvalidParameter(f"{prefix}.mu", "must be > 0")
        if spec.tau_max <= 0:
            raise InvalidParameter(f"{prefix}.tau_max", "must be > 0")
        if not (0.0 <= spec.mix_fraction <= 1.0):
            raise InvalidParameter(f"{prefix}.mix_fraction", "must lie in [0, 1]")
        mix_total += spec.mix_fraction
    if abs(mix_total - 1.0) > 1e-9:
        raise InvalidParameter("classes", f"mix fractions must sum to 1 (got {mix_total})")

    return raw
