"""Comparison forwarding policies: the community/centrality scheme and
plain flooding.

The community scheme aggregates the training trace into one static contact
graph, runs clique percolation on it (nodes left out get singleton
pseudo-communities so everyone belongs somewhere), and scores each node's
popularity by the C-Window technique: the average number of distinct nodes
it contacted per fixed-length time window. The network-wide average is the
node's global rank; restricting the count to contacts with members of one
community gives its local rank inside that community.

Forwarding then climbs the popularity gradient: outside the destination's
community a carrier hands off to strictly more popular nodes or to anyone
who shares a community with the destination; once inside, only to members
of that shared community with a strictly higher local rank, until the
destination itself is met.

Flooding hands the message to every node that does not have it yet. It is
the delivery-ratio upper bound and the transmission-count worst case for
any single-copy-per-node policy on the same trace.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cpm import DEFAULT_CLIQUE_CAP, percolate
from .slicing import DEFAULT_W_TH, COUNT, DURATION
from .trace import INTERVAL, Trace

CWIN_DEFAULT = 6 * 3600


@dataclass(frozen=True)
class CommunityAssignment:
    """Static communities covering every node.

    ``communities[i]`` is a member set; ``membership[v]`` the set of
    community indices containing v. Detected communities come first,
    singleton pseudo-communities after them.
    """

    communities: tuple[frozenset[int], ...]
    membership: dict[int, frozenset[int]]

    def shares_community(self, u: int, v: int) -> bool:
        return bool(self.membership.get(u, frozenset()) & self.membership.get(v, frozenset()))

    def common(self, u: int, v: int) -> frozenset[int]:
        return self.membership.get(u, frozenset()) & self.membership.get(v, frozenset())


@dataclass(frozen=True)
class RankTable:
    """C-Window popularity scores.

    ``global_rank[v]`` averages v's distinct contacts per window over the
    whole training span; ``local_rank[(v, c)]`` restricts the count to
    members of community c. Both exist for every node / every community a
    node belongs to, zero when it never met anyone.
    """

    global_rank: dict[int, float]
    local_rank: dict[tuple[int, int], float]

    def g(self, v: int) -> float:
        return self.global_rank.get(v, 0.0)

    def l(self, v: int, c: int) -> float:
        return self.local_rank.get((v, c), 0.0)


@dataclass(frozen=True)
class BubbleState:
    """Frozen training output the forwarding rule consults."""

    assignment: CommunityAssignment
    ranks: RankTable


def _aggregate_edges(trace: Trace, weight_mode: str) -> dict[tuple[int, int], float]:
    """Whole-trace pair weights: contact count, or summed duration."""
    if trace.n_events == 0:
        return {}
    pairs = np.stack([trace.a, trace.b], axis=1)
    if weight_mode == COUNT:
        uniq, counts = np.unique(pairs, axis=0, return_counts=True)
        weights = counts.astype(float)
    else:
        lengths = (trace.end - trace.start).astype(float)
        uniq, inverse = np.unique(pairs, axis=0, return_inverse=True)
        weights = np.zeros(uniq.shape[0])
        np.add.at(weights, inverse, lengths)
    return {(int(a), int(b)): float(w) for (a, b), w in zip(uniq, weights)}


def build_bubble_state(
    training_trace: Trace,
    cwin_len: int = CWIN_DEFAULT,
    k: int = 3,
    w_th: float | None = None,
    clique_cap: int = DEFAULT_CLIQUE_CAP,
) -> BubbleState:
    """Train communities and ranks on one trace.

    The aggregate graph keeps pairs whose whole-trace weight reaches w_th
    (same threshold convention as window slicing); percolation with the
    given k yields the communities, and every node outside them gets a
    singleton pseudo-community. Ranks average distinct-contact counts over
    the C-Windows spanning the trace.
    """
    if cwin_len <= 0:
        raise ValueError("cwin_len must be positive")
    weight_mode = DURATION if training_trace.duration_mode == INTERVAL else COUNT
    if w_th is None:
        w_th = DEFAULT_W_TH[weight_mode]

    edges = {p: w for p, w in _aggregate_edges(training_trace, weight_mode).items() if w >= w_th}
    adj: dict[int, set[int]] = {}
    for a, b in edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    detected = percolate(adj, k=k, cap=clique_cap) if adj else []

    communities: list[frozenset[int]] = list(detected)
    covered: set[int] = set().union(*detected) if detected else set()
    for v in range(training_trace.node_count):
        if v not in covered:
            communities.append(frozenset([v]))
    membership: dict[int, set[int]] = {v: set() for v in range(training_trace.node_count)}
    for cid, members in enumerate(communities):
        for v in members:
            membership.setdefault(v, set()).add(cid)

    # Distinct (window, node, peer) triples; each contact event counts both
    # directions so every endpoint sees the other as a peer.
    n_nodes = training_trace.node_count
    if training_trace.n_events:
        wins = training_trace.start // cwin_len
        fwd = np.stack([wins, training_trace.a, training_trace.b], axis=1)
        rev = np.stack([wins, training_trace.b, training_trace.a], axis=1)
        triples = np.unique(np.concatenate([fwd, rev]), axis=0)
        n_windows = int(wins.max() - wins.min() + 1)
    else:
        triples = np.empty((0, 3), np.int64)
        n_windows = 1

    counts = np.bincount(triples[:, 1], minlength=n_nodes) if triples.size else np.zeros(n_nodes, int)
    global_rank = {v: float(counts[v] / n_windows) for v in range(n_nodes)}

    local_rank: dict[tuple[int, int], float] = {}
    member_mask = np.zeros(n_nodes, bool)
    for cid, members in enumerate(communities):
        member_mask[:] = False
        member_mask[list(members)] = True
        if triples.size:
            sel = member_mask[triples[:, 2]]
            local_counts = np.bincount(triples[sel, 1], minlength=n_nodes)
        else:
            local_counts = np.zeros(n_nodes, int)
        for v in members:
            local_rank[(v, cid)] = float(local_counts[v] / n_windows)

    return BubbleState(
        CommunityAssignment(tuple(communities), {v: frozenset(s) for v, s in membership.items()}),
        RankTable(global_rank, local_rank),
    )


def bubble_forward_decision(carrier: int, encountered: int, destination: int, state: BubbleState) -> bool:
    """One forwarding decision of the community/centrality policy.

    Local phase (carrier already shares a community with the destination):
    hand off only into a shared community where the encountered node ranks
    strictly higher, or to the destination itself. Global phase: hand off
    on strictly higher global rank or to anyone sharing a community with
    the destination.
    """
    if encountered == destination:
        return True
    asg, ranks = state.assignment, state.ranks
    carrier_dest = asg.common(carrier, destination)
    if carrier_dest:
        enc_coms = asg.membership.get(encountered, frozenset())
        return any(ranks.l(encountered, c) > ranks.l(carrier, c)
                   for c in carrier_dest & enc_coms)
    if ranks.g(encountered) > ranks.g(carrier):
        return True
    return asg.shares_community(encountered, destination)


def flood_decision(carrier: int, encountered: int, carriers) -> bool:
    """Flooding: forward iff the encountered node lacks the message."""
    return encountered not in carriers


def bubble_state_to_json(state: BubbleState, path: str | Path | None = None) -> str:
    """Dump communities and ranks for inspection."""
    obj = {
        "communities": [sorted(c) for c in state.assignment.communities],
        "global_rank": {str(v): r for v, r in sorted(state.ranks.global_rank.items())},
        "local_rank": [
            {"node": v, "community": c, "rank": r}
            for (v, c), r in sorted(state.ranks.local_rank.items())
        ],
    }
    text = json.dumps(obj, indent=2)
    if path is not None:
        Path(path).write_text(text)
    return text
