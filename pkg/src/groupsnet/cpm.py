"""Clique percolation community detection.

A community is the union of all k-cliques reachable from one another
through adjacent k-cliques, where adjacency means sharing k-1 nodes.
Communities may overlap in nodes; nodes in no k-clique belong to no
community.

Enumeration runs Bron-Kerbosch with pivoting over maximal cliques.
Percolation merges maximal cliques of size >= k that share >= k-1 nodes,
which yields exactly the k-clique percolation communities: any two
k-cliques inside one maximal clique chain through it, and two maximal
cliques sharing k-1 nodes are bridged by a k-clique on the shared nodes.
A configurable cap bounds the enumeration so pathological windows fail
loudly instead of hanging.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator, Mapping

DEFAULT_CLIQUE_CAP = 10**6

Adjacency = Mapping[int, set[int]]


class CliqueCapExceeded(RuntimeError):
    """Clique enumeration grew past the configured cap."""


def _adjacency(graph) -> Adjacency:
    """Accept a WindowGraph-like object (has .adjacency()) or a plain dict."""
    if hasattr(graph, "adjacency"):
        return graph.adjacency()
    return graph


def maximal_cliques(adj: Adjacency, cap: int = DEFAULT_CLIQUE_CAP) -> Iterator[frozenset[int]]:
    """Yield all maximal cliques (Bron-Kerbosch, pivot on max degree in P|X)."""
    count = 0

    def expand(r: set[int], p: set[int], x: set[int]) -> Iterator[frozenset[int]]:
        nonlocal count
        if not p and not x:
            count += 1
            if count > cap:
                raise CliqueCapExceeded(f"more than {cap} maximal cliques")
            yield frozenset(r)
            return
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in list(p - adj[pivot]):
            yield from expand(r | {v}, p & adj[v], x & adj[v])
            p.remove(v)
            x.add(v)

    if adj:
        yield from expand(set(), set(adj.keys()), set())


def k_cliques(graph, k: int, cap: int = DEFAULT_CLIQUE_CAP) -> set[frozenset[int]]:
    """All node sets of size exactly k that are pairwise adjacent.

    Expands maximal cliques into their k-subsets (deduplicated).
    Raises CliqueCapExceeded past ``cap`` distinct k-cliques.
    """
    if k < 3:
        raise ValueError("k must be >= 3")
    adj = _adjacency(graph)
    out: set[frozenset[int]] = set()
    for clique in maximal_cliques(adj, cap=cap):
        if len(clique) < k:
            continue
        for sub in combinations(sorted(clique), k):
            out.add(frozenset(sub))
            if len(out) > cap:
                raise CliqueCapExceeded(f"more than {cap} {k}-cliques")
    return out


def percolate(graph, k: int = 3, cap: int = DEFAULT_CLIQUE_CAP) -> list[frozenset[int]]:
    """k-clique percolation communities, sorted by member tuple.

    Merges maximal cliques of size >= k through shared-(k-1)-node adjacency
    using an inverted node index, so only cliques sharing at least one node
    are compared. The cap bounds the number of maximal cliques considered.
    """
    if k < 3:
        raise ValueError("k must be >= 3")
    adj = _adjacency(graph)
    cliques = [c for c in maximal_cliques(adj, cap=cap) if len(c) >= k]

    parent = list(range(len(cliques)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[rj] = ri

    by_node: dict[int, list[int]] = {}
    for idx, clique in enumerate(cliques):
        for node in clique:
            by_node.setdefault(node, []).append(idx)

    for idx, clique in enumerate(cliques):
        candidates = {j for node in clique for j in by_node[node] if j > idx}
        for j in candidates:
            if find(idx) != find(j) and len(clique & cliques[j]) >= k - 1:
                union(idx, j)

    groups: dict[int, set[int]] = {}
    for idx, clique in enumerate(cliques):
        groups.setdefault(find(idx), set()).update(clique)
    return sorted((frozenset(g) for g in groups.values()), key=lambda c: tuple(sorted(c)))


def percolate_bruteforce(graph, k: int = 3) -> list[frozenset[int]]:
    """Independent oracle: enumerate every k-subset, test it for cliqueness,
    link k-cliques sharing k-1 nodes, and take connected components.

    Exponential; only usable on small graphs. Kept separate from
    :func:`percolate` on purpose so the two can check each other.
    """
    adj = _adjacency(graph)
    nodes = sorted(adj.keys())
    cliques = [frozenset(c) for c in combinations(nodes, k)
               if all(v in adj[u] for u, v in combinations(c, 2))]
    n = len(cliques)
    neighbors: dict[int, list[int]] = {i: [] for i in range(n)}
    for i in range(n):
        for j in range(i + 1, n):
            if len(cliques[i] & cliques[j]) == k - 1:
                neighbors[i].append(j)
                neighbors[j].append(i)

    seen: set[int] = set()
    communities = []
    for i in range(n):
        if i in seen:
            continue
        stack, comp = [i], set()
        seen.add(i)
        while stack:
            cur = stack.pop()
            comp.update(cliques[cur])
            for nxt in neighbors[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        communities.append(frozenset(comp))
    return sorted(communities, key=lambda c: tuple(sorted(c)))
