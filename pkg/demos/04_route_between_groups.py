"""
The group graph and the most probable route
============================================

Groups seen during a lookback window become nodes of a probabilistic
graph. A node's weight is the chance the group re-meets within the
message TTL (from its observed meeting rate); an edge weighs how easily
a message hops between two groups (member overlap times both re-meeting
chances). The best origin-to-destination route maximizes the product of
edge weights, found as a shortest path in minus-log space. The members
of the route's groups form the forwarding list: the only devices that
will carry the message.
"""

from groupsnet import (
    ExperimentConfig,
    SynthConfig,
    build_group_graph,
    build_timelines,
    forwarding_list,
    generate_synthetic,
    most_probable_route,
    recent_groups,
)

DAY = 86400

cfg = SynthConfig(node_count=40, group_count=5, group_size_range=(4, 6),
                  daily_meeting_prob=0.8, jitter=1800, noise_contact_rate=1.0,
                  horizon_days=21, seed=11)
trace = generate_synthetic(cfg)

LOOKBACK = 14 * DAY
TTL = 7 * DAY
now = trace.span

exp_cfg = ExperimentConfig(ttl=TTL, lookback=LOOKBACK)
timelines = build_timelines(trace, exp_cfg)
recent = recent_groups(timelines, now=now, lookback=LOOKBACK, tw=3600)
graph = build_group_graph(recent, LOOKBACK, TTL)

print(f"group graph: {graph.n_groups} groups, {len(graph.edges)} edges")
for gid, node in sorted(graph.nodes.items()):
    print(f"  group {gid}: members {sorted(node.members)}, "
          f"{node.rate * DAY:.2f} meetings/day, "
          f"p(re-meet within TTL) = {node.p_remeet:.4f}")
print("  edges:")
for (gi, gj), w in sorted(graph.edges.items()):
    print(f"    {gi} -- {gj}: weight {w:.4f}")

# Pick an origin from one group and a destination from another.
gids = sorted(graph.nodes)
origin = min(graph.nodes[gids[0]].members)
destination = min(graph.nodes[gids[-1]].members - graph.nodes[gids[0]].members)
route = most_probable_route(graph, origin, destination)

print()
print(f"route {origin} -> {destination}:")
if route is None:
    print("  none: one endpoint belongs to no recent group")
else:
    print(f"  groups {list(route.groups)}, probability {route.probability:.4f}")
    fl = forwarding_list(route, destination)
    print(f"  forwarding list ({len(fl)} devices): {sorted(fl)}")

# A pair inside the same group short-circuits to probability one.
same = sorted(graph.nodes[gids[0]].members)[:2]
route2 = most_probable_route(graph, same[0], same[1])
print(f"route {same[0]} -> {same[1]} (same group): "
      f"groups {list(route2.groups)}, probability {route2.probability}")
