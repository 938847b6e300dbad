"""Group-aware route selection: probabilistic group graph and the most
probable group-to-group path.

Each recently seen group becomes a vertex whose re-meeting probability
within a message's TTL comes from a constant-rate model of its meeting
history (rate = meetings / lookback). An edge joins two groups sharing
members; its weight is the member-overlap coefficient times both endpoint
re-meeting probabilities. The probability of a route is the product of its
edge weights, so the most probable route is a shortest path under
edge cost -log w, found with Dijkstra through virtual terminals attached
to every group containing the origin or the destination.

The forwarding rule is then membership: a carrier hands the message to an
encountered device only if that device belongs to a route group (or is the
destination itself).
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .tracking import RecentGroup

_SOURCE = -1
_SINK = -2


@dataclass(frozen=True)
class GroupNode:
    """One group vertex: members, meeting rate, and TTL re-meeting probability."""

    group_id: int
    members: frozenset[int]
    rate: float
    p_remeet: float


@dataclass
class GroupGraph:
    """Probabilistic graph over recent groups.

    ``edges`` maps a canonical (gi, gj), gi < gj, to the weight w in (0, 1];
    ``log_edges`` holds -ln w for shortest-path queries. An edge exists iff
    the two groups share at least one member.
    """

    nodes: dict[int, GroupNode]
    edges: dict[tuple[int, int], float]
    log_edges: dict[tuple[int, int], float]
    membership: dict[int, set[int]]  # device -> group ids

    @property
    def n_groups(self) -> int:
        return len(self.nodes)

    def neighbors(self, gid: int) -> list[int]:
        out = []
        for (i, j) in self.edges:
            if i == gid:
                out.append(j)
            elif j == gid:
                out.append(i)
        return out

    def weight(self, gi: int, gj: int) -> float:
        return self.edges[(gi, gj) if gi < gj else (gj, gi)]

    def groups_of(self, device: int) -> list[int]:
        return sorted(self.membership.get(device, ()))


@dataclass(frozen=True)
class Route:
    """An ordered group-to-group path and its probability."""

    groups: tuple[int, ...]
    probability: float
    device_set: frozenset[int]

    def to_json_obj(self, graph: GroupGraph | None = None) -> dict:
        obj: dict = {
            "groups": list(self.groups),
            "probability": self.probability,
            "devices": sorted(self.device_set),
        }
        if graph is not None:
            obj["members"] = {str(g): sorted(graph.nodes[g].members) for g in self.groups}
            obj["edge_weights"] = [graph.weight(a, b) for a, b in zip(self.groups, self.groups[1:])]
        return obj


def remeet_probability(meeting_count: float, lookback: float, ttl: float) -> float:
    """Chance of at least one re-meeting within ``ttl`` for a group seen
    ``meeting_count`` times over ``lookback`` seconds: 1 - exp(-rate*ttl)."""
    if lookback <= 0:
        raise ValueError("lookback must be positive")
    if ttl <= 0:
        raise ValueError("ttl must be positive")
    if meeting_count < 0:
        raise ValueError("meeting_count must be >= 0")
    rate = meeting_count / lookback
    return -math.expm1(-rate * ttl)


def poisson_pmf(rate: float, t: float, k: int) -> float:
    """P[N(t) = k] for a constant-rate arrival process: e^-rt (rt)^k / k!."""
    if rate < 0 or t < 0 or k < 0:
        raise ValueError("rate, t, k must be >= 0")
    rt = rate * t
    if rt == 0:
        return 1.0 if k == 0 else 0.0
    return math.exp(k * math.log(rt) - rt - math.lgamma(k + 1))


def build_group_graph(recent: Sequence[RecentGroup], lookback: float, ttl: float) -> GroupGraph:
    """Assemble the probabilistic group graph from a lookback's group activity.

    Edge weight between overlapping groups i, j:
    overlap(i,j) * p_remeet(i) * p_remeet(j), with overlap the member
    Jaccard coefficient. Weights that underflow to zero are omitted so the
    log-space graph stays finite. The graph may be disconnected.
    """
    nodes: dict[int, GroupNode] = {}
    membership: dict[int, set[int]] = {}
    for rg in recent:
        p = remeet_probability(rg.meeting_count, lookback, ttl)
        nodes[rg.group_id] = GroupNode(rg.group_id, rg.members, rg.meeting_count / lookback, p)
        for device in rg.members:
            membership.setdefault(device, set()).add(rg.group_id)

    edges: dict[tuple[int, int], float] = {}
    log_edges: dict[tuple[int, int], float] = {}
    for gi, gj in combinations(sorted(nodes), 2):
        a, b = nodes[gi], nodes[gj]
        inter = len(a.members & b.members)
        if inter == 0:
            continue
        overlap = inter / len(a.members | b.members)
        w = overlap * a.p_remeet * b.p_remeet
        if w <= 0.0:
            continue
        edges[(gi, gj)] = w
        log_edges[(gi, gj)] = -math.log(w)
    return GroupGraph(nodes, edges, log_edges, membership)


def most_probable_route(graph: GroupGraph, origin: int, destination: int) -> Route | None:
    """Most probable group path between any origin group and any
    destination group, or None when no such path exists.

    Dijkstra on -log weights with a virtual source feeding every group
    containing the origin and a virtual sink fed by every group containing
    the destination, both over zero-cost links, so the best attachment on
    each side is chosen by the search itself. If origin and destination
    share a group the single-group route has probability 1 by convention.
    Ties break toward fewer groups, then the smallest group-id sequence.
    """
    origin_gids = graph.groups_of(origin)
    dest_gids = graph.groups_of(destination)
    if not origin_gids or not dest_gids:
        return None

    shared = sorted(set(origin_gids) & set(dest_gids))
    if shared:
        gid = shared[0]
        return Route((gid,), 1.0, graph.nodes[gid].members)

    adjacency: dict[int, list[tuple[int, float]]] = {gid: [] for gid in graph.nodes}
    for (gi, gj), cost in graph.log_edges.items():
        adjacency[gi].append((gj, cost))
        adjacency[gj].append((gi, cost))
    adjacency[_SOURCE] = [(gid, 0.0) for gid in origin_gids]
    dest_set = set(dest_gids)

    # Heap keys (cost, hops, path) are lexicographic and grow monotonically
    # along any extension, so the first pop of the sink realizes the
    # documented tie-break exactly.
    heap: list[tuple[float, int, tuple[int, ...]]] = [(0.0, 0, (_SOURCE,))]
    settled: set[int] = set()
    while heap:
        cost, hops, path = heapq.heappop(heap)
        node = path[-1]
        if node in settled:
            continue
        settled.add(node)
        if node == _SINK:
            groups = path[1:-1]
            prob = 1.0
            for a, b in zip(groups, groups[1:]):
                prob *= graph.weight(a, b)
            devices = frozenset().union(*(graph.nodes[g].members for g in groups))
            return Route(groups, prob, devices)
        if node in dest_set:
            heapq.heappush(heap, (cost, hops + 1, path + (_SINK,)))
        for nxt, step in adjacency[node]:
            if nxt not in settled:
                heapq.heappush(heap, (cost + step, hops + 1, path + (nxt,)))
    return None


def forwarding_list(route: Route | None, destination: int) -> frozenset[int]:
    """Devices that should receive a copy: all route-group members plus the
    destination itself. An absent route forwards to no one (the origin can
    still deliver on a direct encounter)."""
    if route is None:
        return frozenset()
    return route.device_set | {destination}


def route_to_json(route: Route | None, graph: GroupGraph | None = None) -> str:
    if route is None:
        return json.dumps({"route": None})
    return json.dumps({"route": route.to_json_obj(graph)}, indent=2)
