"""Walk through the physical layer: gains, per-Hz SNRs, rates and delays.

Prints the link budget of every hop in the default geometry and the delay
a sample task sees on each path. Run with `python demos/link_budget_tour.py`.
"""
import math

import numpy as np

from ntn_offload.channel import draw_access_states, feeder_states
from ntn_offload.delay import compute_delay, feeder_delay, propagation_delay
from ntn_offload.scenario import default_scenario

scn = default_scenario()
r = scn.radio

print("=== Geometry ===")
for name, pos in (("HAPS", scn.haps_pos), ("LEO", scn.leo_pos), ("gateway", scn.gw_pos)):
    print(f"{name:>8}: ({pos.x/1e3:.1f}, {pos.y/1e3:.1f}, {pos.z/1e3:.1f}) km")
print(f"HAPS-LEO distance: {scn.haps_pos.distance_to(scn.leo_pos)/1e3:.1f} km")
print(f"LEO-GW distance:   {scn.leo_pos.distance_to(scn.gw_pos)/1e3:.1f} km")

print("\n=== Access links (GD to HAPS, S band) ===")
states = draw_access_states(scn, np.random.default_rng(scn.seed))
for s in states[:4]:
    print(
        f"GD {s.gd_id}: gain {10*math.log10(s.gain):7.1f} dB, "
        f"SNR/Hz {10*math.log10(s.psd_snr):5.1f} dB, "
        f"{s.spectral_eff:.2f} bit/s/Hz"
    )
print(f"... ({len(states)} devices total)")
share = 1.0 / scn.n_gds
rate = share * r.B_u * states[0].spectral_eff
print(f"equal-share rate ({share:.3f} of {r.B_u/1e6:.1f} MHz): {rate/1e3:.0f} kb/s")

print("\n=== Feeder chain (Ka band) ===")
hs, sg = feeder_states(scn)
for st in (hs, sg):
    print(
        f"{st.link:>8}: gain {10*math.log10(st.gain):7.1f} dB, "
        f"SNR/Hz {10*math.log10(st.psd_snr):5.1f} dB, "
        f"{st.spectral_eff:.2f} bit/s/Hz"
    )
p_hs = propagation_delay(scn.haps_pos, scn.leo_pos)
p_sg = propagation_delay(scn.leo_pos, scn.gw_pos)
print(f"one-way propagation: {p_hs*1e3:.2f} ms + {p_sg*1e3:.2f} ms")

print("\n=== Delay of one large task (82 kb, 500 cycles/bit) ===")
d, mu = 82_000, 500.0
print(f"local compute  ({scn.compute.f_local/1e6:.0f} MHz): {compute_delay(d, mu, scn.compute.f_local)*1e3:7.1f} ms")
f_share = scn.compute.F_h / scn.n_gds
print(f"edge compute   ({f_share/1e6:.0f} MHz slice): {compute_delay(d, mu, f_share)*1e3:7.1f} ms")
tx = d / rate
print(f"access uplink  (equal share):  {tx*1e3:7.1f} ms")
relay = feeder_delay(d, r.B_h * hs.spectral_eff, r.B_h * sg.spectral_eff, p_hs, p_sg)
print(f"feeder relay   (whole link):   {relay*1e3:7.1f} ms  (cloud computes instantly)")
