"""
Group routing against its baselines
====================================

Same trace, same random messages, three forwarding policies:

* flooding hands the message to everyone (delivery upper bound, maximal
  cost),
* the community/centrality baseline climbs the social hierarchy toward
  the destination's community,
* group routing precomputes a forwarding list from the most probable
  group-to-group route and only those devices ever carry the message.

Delivery is a race against the TTL; transmissions are the price paid.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from groupsnet import ExperimentConfig, SynthConfig, generate_synthetic, run_experiment

DAY = 86400
out_dir = Path(__file__).parent / "out"
out_dir.mkdir(exist_ok=True)

trace = generate_synthetic(
    SynthConfig(node_count=60, group_count=8, group_size_range=(4, 6),
                daily_meeting_prob=0.8, jitter=1800, noise_contact_rate=2.0,
                horizon_days=21, seed=29))

cfg = ExperimentConfig(ttl=3 * DAY, n_messages=60, n_seeds=4,
                       lookback=10 * DAY, master_seed=1,
                       time_grid=tuple(float(h) for h in range(6, 73, 6)))
result = run_experiment(trace, cfg, jobs=2)

print(f"{cfg.n_messages} messages x {cfg.n_seeds} seeds, TTL {cfg.ttl // DAY} days\n")
print(f"{'policy':<10} {'delivery':>9} {'tx/message':>11} {'benefit/cost':>13}")
for name in cfg.policies:
    pm = result.policies[name]
    print(f"{name:<10} {pm.delivery_ratio.final:>9.3f} "
          f"{pm.transmissions.final:>11.2f} {pm.benefit_cost.final:>13.4f}")

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 3.5))
for name in cfg.policies:
    pm = result.policies[name]
    ax1.plot(pm.delivery_ratio.times, pm.delivery_ratio.mean, label=name)
    ax1.fill_between(pm.delivery_ratio.times, pm.delivery_ratio.ci_low,
                     pm.delivery_ratio.ci_high, alpha=0.2)
    ax2.plot(pm.transmissions.times, pm.transmissions.mean, label=name)
ax1.set_xlabel("hours since send")
ax1.set_ylabel("delivery ratio")
ax1.legend()
ax2.set_xlabel("hours since send")
ax2.set_ylabel("transmissions per message")
fig.tight_layout()
fig.savefig(out_dir / "policy_comparison.png", dpi=120)
print(f"\nwrote {out_dir / 'policy_comparison.png'}")
