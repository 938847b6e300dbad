"""Probabilistic group graph and most-probable-route selection.

The reference router here enumerates every simple path by DFS and picks
the best (probability, length, lexicographic) candidate; the production
router is Dijkstra in -log space. Independent formulations, one answer.
"""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from groupsnet.policy import (
    GroupGraph,
    build_group_graph,
    forwarding_list,
    most_probable_route,
    poisson_pmf,
    remeet_probability,
)
from groupsnet.tracking import RecentGroup

DAY = 86400


def enumerate_best_route(graph: GroupGraph, origin: int, destination: int):
    """All simple paths between origin groups and destination groups."""
    ogids = set(graph.groups_of(origin))
    dgids = set(graph.groups_of(destination))
    if not ogids or not dgids:
        return None
    shared = ogids & dgids
    if shared:
        return (min(shared),), 1.0
    neighbors = {g: set() for g in graph.nodes}
    for gi, gj in graph.edges:
        neighbors[gi].add(gj)
        neighbors[gj].add(gi)
    best = None  # (-prob, len, path)

    def dfs(path, prob):
        nonlocal best
        here = path[-1]
        if here in dgids:
            key = (-prob, len(path), path)
            if best is None or key < best:
                best = key
            # a longer continuation can't beat this prefix at this length,
            # but other destinations may still lie further on
        for nxt in neighbors[here]:
            if nxt in path:
                continue
            dfs(path + (nxt,), prob * graph.weight(here, nxt))

    for g in sorted(ogids):
        dfs((g,), 1.0)
    return None if best is None else (best[2], -best[0])


def graph_of(groups, lookback=21 * DAY, ttl=7 * DAY):
    recents = [RecentGroup(gid, frozenset(members), count)
               for gid, (members, count) in enumerate(groups)]
    return build_group_graph(recents, lookback, ttl)


class TestRemeetProbability:
    def test_zero_meetings_zero_probability(self):
        assert remeet_probability(0, 21 * DAY, 7 * DAY) == 0.0

    def test_log_two_point(self):
        # rate * ttl = ln 2 makes the miss probability exactly one half
        assert remeet_probability(math.log(2), 1.0, 1.0) == pytest.approx(0.5, abs=1e-12)

    def test_daily_meetings_weekly_ttl(self):
        p = remeet_probability(21, 21 * DAY, 7 * DAY)
        assert p == pytest.approx(0.9990881180344455, abs=1e-12)

    def test_monotone_in_ttl(self):
        ttls = np.linspace(3600, 14 * DAY, 100)
        ps = [remeet_probability(5, 21 * DAY, t) for t in ttls]
        assert all(b > a for a, b in zip(ps, ps[1:]))

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            remeet_probability(3, 0, 10)
        with pytest.raises(ValueError):
            remeet_probability(3, 10, 0)
        with pytest.raises(ValueError):
            remeet_probability(-1, 10, 10)


class TestPoissonPmf:
    def test_zero_events(self):
        assert poisson_pmf(0.5, 2.0, 0) == pytest.approx(math.exp(-1.0))

    def test_one_event_at_unit_mass(self):
        assert poisson_pmf(1.0, 1.0, 1) == pytest.approx(0.36787944117144233, abs=1e-15)

    def test_normalizes(self):
        for lt in (0.5, 1.0, 2.0):
            total = sum(poisson_pmf(lt, 1.0, k) for k in range(51))
            assert total == pytest.approx(1.0, abs=1e-9)

    def test_matches_scipy(self):
        from scipy import stats
        for k in range(7):
            assert poisson_pmf(0.7, 3.0, k) == pytest.approx(
                stats.poisson.pmf(k, 2.1), rel=1e-12)


class TestGroupGraph:
    def test_edge_weight_combines_overlap_and_probabilities(self):
        g = graph_of([(("a b c".split()), 21), (("c d".split()), 7)])
        p1 = g.nodes[0].p_remeet
        p2 = g.nodes[1].p_remeet
        assert g.weight(0, 1) == pytest.approx((1 / 4) * p1 * p2, abs=1e-15)

    def test_disjoint_groups_share_no_edge(self):
        g = graph_of([({1, 2, 3}, 5), ({4, 5, 6}, 5)])
        assert g.edges == {}

    def test_identical_members_full_overlap(self):
        g = graph_of([({1, 2}, 10), ({1, 2}, 4)])
        p1, p2 = g.nodes[0].p_remeet, g.nodes[1].p_remeet
        assert g.weight(0, 1) == pytest.approx(p1 * p2)

    def test_membership_index(self):
        g = graph_of([({1, 2, 3}, 5), ({3, 4}, 5)])
        assert g.groups_of(3) == [0, 1]
        assert g.groups_of(9) == []


class TestRoutes:
    def test_same_group_is_probability_one(self):
        g = graph_of([({1, 2, 3}, 5)])
        route = most_probable_route(g, 1, 3)
        assert route.groups == (0,)
        assert route.probability == 1.0

    def test_two_hop_beats_weak_direct_link(self):
        # hand-built weights: chain 0.1 * 0.2 = 0.02 > direct 0.01
        g = graph_of([({1, 10}, 21), ({10, 2, 11}, 21), ({11, 3}, 21)])
        # overwrite weights to the worked example's values
        g.edges[(0, 1)] = 0.1
        g.edges[(1, 2)] = 0.2
        g.edges[(0, 2)] = 0.01
        g.log_edges[(0, 1)] = -math.log(0.1)
        g.log_edges[(1, 2)] = -math.log(0.2)
        g.log_edges[(0, 2)] = -math.log(0.01)
        route = most_probable_route(g, 1, 3)
        assert route.groups == (0, 1, 2)
        assert route.probability == pytest.approx(0.02)

    def test_unreachable_destination_is_none(self):
        g = graph_of([({1, 2, 3}, 5)])
        assert most_probable_route(g, 1, 99) is None

    def test_disconnected_components_give_none(self):
        g = graph_of([({1, 2}, 5), ({3, 4}, 5)])
        assert most_probable_route(g, 1, 3) is None

    def test_tie_breaks_to_smallest_group_sequence(self):
        # diamond with equal weights: both two-hop routes tie on probability
        g = graph_of([({0, 1}, 7), ({1, 2, 9}, 7), ({1, 3, 9}, 7), ({2, 3, 4}, 7)])
        for e in list(g.edges):
            g.edges[e] = 0.25
            g.log_edges[e] = -math.log(0.25)
        route = most_probable_route(g, 0, 4)
        assert route.groups == (0, 1, 3)

    def test_matches_exhaustive_enumeration(self):
        rng = np.random.default_rng(1337)
        for _ in range(60):
            n_groups = int(rng.integers(2, 8))
            n_nodes = int(rng.integers(4, 12))
            recents = [RecentGroup(g, frozenset(int(x) for x in
                                                rng.choice(n_nodes, size=int(rng.integers(2, 5)), replace=False)),
                                   int(rng.integers(1, 22)))
                       for g in range(n_groups)]
            graph = build_group_graph(recents, 21 * DAY, 7 * DAY)
            origin, dest = (int(x) for x in rng.choice(n_nodes, size=2, replace=False))
            mine = most_probable_route(graph, origin, dest)
            ref = enumerate_best_route(graph, origin, dest)
            if ref is None:
                assert mine is None
                continue
            ref_path, ref_prob = ref
            assert mine.groups == ref_path
            assert mine.probability == pytest.approx(ref_prob, abs=1e-9)


class TestForwardingList:
    def test_union_of_route_groups_plus_destination(self):
        g = graph_of([({1, 2, 3}, 9), ({3, 4}, 9)])
        route = most_probable_route(g, 1, 4)
        assert forwarding_list(route, 5) == frozenset({1, 2, 3, 4, 5})

    def test_single_group_containing_destination(self):
        g = graph_of([({1, 2, 3}, 9)])
        route = most_probable_route(g, 1, 3)
        assert forwarding_list(route, 3) == frozenset({1, 2, 3})

    def test_no_route_forwards_to_nobody(self):
        assert forwarding_list(None, 7) == frozenset()
