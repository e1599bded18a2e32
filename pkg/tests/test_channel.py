import math

import numpy as np
import pytest
from scipy import stats

from ntn_offload.channel import (
    atg_pathloss,
    draw_access_states,
    feeder_states,
    link_rate,
    los_mimo_gain,
    los_probability,
    rician_mrc_gain,
)
from ntn_offload.scenario import AtgEnvironment, Position3D, SPEED_OF_LIGHT, default_scenario


def test_los_probability_overhead():
    # Direct evaluation: 1/(1 + 9.61*exp(-0.16*(90 - 9.61))).
    env = AtgEnvironment()
    expected = 1.0 / (1.0 + 9.61 * math.exp(-0.16 * (90.0 - 9.61)))
    assert math.isclose(los_probability(90.0, env), expected, rel_tol=1e-12)
    assert abs(los_probability(90.0, env) - 0.99998) < 1e-4


def test_free_space_pathloss_reference():
    # 20 km at 2.1 GHz is about 124.91 dB of free-space loss.
    env = AtgEnvironment(eta_los_db=0.0, eta_nlos_db=0.0)
    gd = Position3D(0.0, 0.0, 0.0)
    haps = Position3D(0.0, 0.0, 20e3)
    gain = atg_pathloss(gd, haps, 2.1e9, env, np.random.default_rng(0))
    loss_db = -10.0 * math.log10(gain)
    expected_db = 20.0 * math.log10(4.0 * math.pi * 20e3 * 2.1e9 / SPEED_OF_LIGHT)
    assert math.isclose(loss_db, expected_db, rel_tol=1e-12)
    assert abs(expected_db - 124.91) < 0.01


def test_zero_excess_loss_is_pure_free_space():
    env = AtgEnvironment(eta_los_db=0.0, eta_nlos_db=0.0)
    gd = Position3D(100.0, -200.0, 0.0)
    haps = Position3D(0.0, 0.0, 20e3)
    d = gd.distance_to(haps)
    fspl = (4.0 * math.pi * d * 2.1e9 / SPEED_OF_LIGHT) ** 2
    # Identical for every draw since both branches add nothing.
    for seed in range(3):
        gain = atg_pathloss(gd, haps, 2.1e9, env, np.random.default_rng(seed))
        assert math.isclose(gain, 1.0 / fspl, rel_tol=1e-12)


def test_rician_pure_los_limit():
    for n in (1, 16, 64):
        gain = rician_mrc_gain(n, 1e12, np.random.default_rng(5))
        assert math.isclose(gain, n, rel_tol=1e-6)


def test_rician_rayleigh_mean():
    # E||h||^2 = n for unit-variance Rayleigh elements.
    rng = np.random.default_rng(11)
    samples = np.array([rician_mrc_gain(16, 0.0, rng) for _ in range(100_000)])
    assert abs(samples.mean() - 16.0) <= 0.02 * 16.0


def test_rician_single_element_exponential():
    rng = np.random.default_rng(13)
    samples = np.array([rician_mrc_gain(1, 0.0, rng) for _ in range(10_000)])
    _, p = stats.kstest(samples, "expon")
    assert p > 0.01


def test_rician_reproducible():
    a = rician_mrc_gain(8, 10.0, np.random.default_rng(99))
    b = rician_mrc_gain(8, 10.0, np.random.default_rng(99))
    assert a == b


def test_los_mimo_single_antenna_is_friis():
    p1, p2 = Position3D(0, 0, 0), Position3D(0, 0, 1000.0)
    lam = 0.01
    assert math.isclose(
        los_mimo_gain(1, 1, lam, 1.0, p1, p2),
        (lam / (4.0 * math.pi * 1000.0)) ** 2,
        rel_tol=1e-12,
    )


def test_los_mimo_scales_with_element_product():
    p1, p2 = Position3D(0, 0, 0), Position3D(0, 0, 1000.0)
    g1 = los_mimo_gain(4, 8, 0.01, 1.0, p1, p2)
    g2 = los_mimo_gain(8, 16, 0.01, 1.0, p1, p2)
    assert math.isclose(g2, 4.0 * g1, rel_tol=1e-12)


def test_los_mimo_reference_value():
    # 64x64 elements, Ka band, HAPS to LEO geometry: about 1.29e-14.
    lam = SPEED_OF_LIGHT / 28e9
    haps, leo = Position3D(0, 0, 20e3), Position3D(0, 5e3, 500e3)
    assert math.isclose(haps.distance_to(leo), 480_026.0, rel_tol=1e-6)
    gain = los_mimo_gain(64, 64, lam, 1.0, haps, leo)
    assert math.isclose(gain, 1.2906e-14, rel_tol=1e-3)


def test_los_mimo_symmetric():
    p1, p2 = Position3D(3, 4, 5), Position3D(-1, 0, 2000.0)
    assert los_mimo_gain(4, 16, 0.02, 0.9, p1, p2) == los_mimo_gain(16, 4, 0.02, 0.9, p2, p1)


def test_link_rate_examples():
    assert link_rate(0.0, 1.4e6, 123.0) == 0.0
    assert math.isclose(link_rate(0.5, 1.4e6, 15.0), 2.8e6, rel_tol=1e-12)
    assert math.isclose(link_rate(1.0, 1e8, 3.0), 2e8, rel_tol=1e-12)


def test_link_rate_linear_in_share():
    for rho in (0.1, 0.25, 0.4):
        assert math.isclose(
            link_rate(2 * rho, 5e6, 9.0), 2 * link_rate(rho, 5e6, 9.0), rel_tol=1e-12
        )


def test_link_rate_rejects_bad_share():
    with pytest.raises(ValueError):
        link_rate(1.5, 1e6, 1.0)


def test_snapshot_draw_deterministic():
    scn = default_scenario()
    a = draw_access_states(scn, np.random.default_rng(1))
    b = draw_access_states(scn, np.random.default_rng(1))
    assert a == b
    assert all(s.gain >= 0 and s.psd_snr >= 0 for s in a)
    hs, sg = feeder_states(scn)
    assert hs.spectral_eff > 0 and sg.spectral_eff > 0
