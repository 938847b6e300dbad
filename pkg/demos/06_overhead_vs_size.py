"""
Does the cost stay flat as the network grows?
==============================================

Flooding's per-message transmission count grows with the population:
every new participant is one more hand-off. Group routing only touches
the members of the groups along one route, so its cost should barely
move. We grow subsets of one large trace by snowball sampling (start at
the most connected node, absorb neighbors) so each subset keeps a
realistic social core, then measure per-message transmissions at each
size.
"""

from groupsnet import ExperimentConfig, SynthConfig, generate_synthetic, overhead_scaling

DAY = 86400

trace = generate_synthetic(
    SynthConfig(node_count=400, group_count=160, group_size_range=(4, 7),
                daily_meeting_prob=0.7, jitter=1800, noise_contact_rate=8.0,
                horizon_days=21, seed=23))
print(f"full trace: {trace.node_count} nodes, {trace.n_events} contacts")

cfg = ExperimentConfig(ttl=3 * DAY, n_messages=30, n_seeds=2, lookback=14 * DAY,
                       policies=("groupsnet", "flooding"), master_seed=7,
                       time_grid=(24.0, 48.0, 72.0))
sizes = [100, 200, 300, 400]
scaling = overhead_scaling(trace, sizes, cfg, jobs=2)

print(f"\n{'nodes':>5}  {'policy':<10} {'tx/msg':>8} {'q1':>6} {'med':>6} "
      f"{'q3':>6} {'delivery':>9}")
for n in sizes:
    for pol in ("groupsnet", "flooding"):
        s = scaling[n][pol]
        print(f"{n:>5}  {pol:<10} {s['mean_transmissions']:>8.2f} "
              f"{s['q1_transmissions']:>6.1f} {s['median_transmissions']:>6.1f} "
              f"{s['q3_transmissions']:>6.1f} {s['delivery_ratio']:>9.3f}")

g = [scaling[n]["groupsnet"]["mean_transmissions"] for n in sizes]
f = [scaling[n]["flooding"]["mean_transmissions"] for n in sizes]
print(f"\ngroup routing cost {min(g):.1f}..{max(g):.1f} transmissions/message "
      f"while flooding grows {f[0]:.0f} -> {f[-1]:.0f} "
      f"({f[-1] / f[0]:.1f}x over a {sizes[-1] / sizes[0]:.0f}x size range)")
