"""Follow one snapshot through the pricing games and the final placement.

Shows, per task: the edge and cloud quotes with their bounds, the resulting
offload flags, the allocated bandwidth share and the realized delay.
"""
from ntn_offload.orchestrator import run_snapshot, tasks_for_snapshot
from ntn_offload.scenario import default_scenario

scn = default_scenario()
tasks = tasks_for_snapshot(scn)
rep = run_snapshot(scn, tasks)

print(f"snapshot seed {rep.seed}, delay price {rep.c_tau:g}/s, {len(tasks)} tasks\n")
print(f"{'id':>3} {'class':>7} {'bits':>7} {'edge quote':>11} {'cloud quote':>11} "
      f"{'flags':>6} {'share':>7} {'delay':>9} {'where':>6}")
for o in sorted(rep.outcomes, key=lambda o: (o.payload_class, o.task_id)):
    flags = f"{o.beta_uh}/{o.beta_hs}"
    print(
        f"{o.task_id:>3} {o.payload_class:>7} {o.d:>7} {o.price_mec:>11.3f} "
        f"{o.price_mcc:>11.3f} {flags:>6} {o.rho:>7.3f} "
        f"{o.delays.total*1e3:>7.2f}ms {o.placement:>6}"
    )

print(f"\nfeeder share: {rep.rho_b:.3f}, relay delay: {(rep.tau_hs+rep.tau_sg)*1e3:.2f} ms")
if rep.pruning:
    print("reverted by the allocators:")
    for ev in rep.pruning:
        print(f"  task {ev.task_id} at {ev.stage}: {ev.reason}")
else:
    print("no task was reverted by the allocators")

t = rep.tier
print("\nreal (delay-free) balance per tier, negative = earns:")
print(f"  ground devices pay {t.real_gd_total:10.3f}")
print(f"  edge server nets   {t.real_mec:10.3f}")
print(f"  cloud nets         {t.real_mcc:10.3f}")
print(f"  sum                {t.real_gd_total + t.real_mec + t.real_mcc:10.3e}")
