"""Exercise both bandwidth allocators on small hand-made instances and
check them against the brute-force oracles."""
import math

from ntn_offload.bandwidth import (
    AccessCandidate,
    FeederCandidate,
    allocate_access,
    allocate_feeder,
)
from ntn_offload.oracles import GridSpec, grid_min_scalar, grid_minmax_simplex

print("=== Shared access channel, min-max fair split ===")
# Three devices with very different payloads; c_tau = B_u = se = 1 so the
# cost of a share rho is simply d/rho + c_Bu*rho.
cands = [
    AccessCandidate(task_id=0, d=0.9, tau_max=100.0, tau_h=0.0,
                    tau_local=30.0, spectral_eff=1.0, price_mec=0.0),
    AccessCandidate(task_id=1, d=0.25, tau_max=100.0, tau_h=0.0,
                    tau_local=30.0, spectral_eff=1.0, price_mec=0.0),
    AccessCandidate(task_id=2, d=0.04, tau_max=100.0, tau_h=0.0,
                    tau_local=30.0, spectral_eff=1.0, price_mec=0.0),
]
alloc = allocate_access(cands, 1.0, 1.0, 1.0)
print(f"cost cap eta* = {alloc.eta:.4f} in [{alloc.eta_min:.4f}, {alloc.eta_max:.4f}]")
for c in cands:
    rho = alloc.shares[c.task_id]
    print(f"  task {c.task_id}: d={c.d:5.2f} -> share {rho:.4f}, cost {c.d/rho + rho:.4f}")
print(f"channel used: {sum(alloc.shares.values()):.4f} of 1")

rhos, value = grid_minmax_simplex(
    [c.d for c in cands], [1.0] * 3,
    [(c.d / (c.tau_max - c.tau_h), 1.0) for c in cands],
)
print(f"oracle min-max value {value:.4f} at shares {[f'{r:.4f}' for r in rhos]}")

print("\n=== Feeder chain, single convex share ===")
feeder = [
    FeederCandidate(task_id=0, d=1_000_000, tau_max=1.0, tau_ih=0.01, tau_h=0.5, price_mcc=0.1),
]
B_h, se = 1e8, 4.0
alloc_f = allocate_feeder(feeder, B_h, se, se, 1.6e-3, 1.7e-3, 1.0, 0.02 / B_h)
a, b = alloc_f.recip_coeff, alloc_f.linear_coeff
print(f"cost a/rho + b*rho with a={a:.4g}, b={b:.4g}")
print(f"allocator picked rho_B = {alloc_f.rho_B:.4f} (closed form {math.sqrt(a/b):.4f})")
rho_g, val_g = grid_min_scalar(a, b, GridSpec(0.01, 1.0, 100_001))
print(f"grid oracle: rho = {rho_g:.4f}, cost {val_g:.6f}")
print(f"budget {alloc_f.budget:.4f} vs realized cost {a/alloc_f.rho_B + b*alloc_f.rho_B:.6f}")
