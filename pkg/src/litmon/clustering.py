"""Greedy agglomerative modularity clustering with deterministic tie-breaks.

Starting from singleton communities, the pair of connected communities with
the largest modularity gain is merged until no merge improves modularity.
Ties are broken by the lexicographically smallest community pair (a
community is named after its smallest node label), so the result depends
only on the graph, never on iteration order or hashing.
"""

from __future__ import annotations

_EPS = 1e-12


def modularity(node_labels, edges: dict[tuple[str, str], float],
               partition: dict[str, int], resolution: float = 1.0) -> float:
    """Weighted Newman modularity of a node->cluster assignment."""
    m = float(sum(edges.values()))
    if m == 0:
        return 0.0
    degree: dict[str, float] = {n: 0.0 for n in node_labels}
    for (a, b), w in edges.items():
        degree[a] += w
        degree[b] += w
    intra: dict[int, float] = {}
    total: dict[int, float] = {}
    for (a, b), w in edges.items():
        if partition[a] == partition[b]:
            intra[partition[a]] = intra.get(partition[a], 0.0) + w
    for node, deg in degree.items():
        c = partition[node]
        total[c] = total.get(c, 0.0) + deg
    q = 0.0
    for c in set(partition.values()):
        q += intra.get(c, 0.0) / m - resolution * (total.get(c, 0.0) / (2 * m)) ** 2
    return q


def greedy_modularity_clusters(node_labels: list[str],
                               edges: dict[tuple[str, str], float],
                               resolution: float = 1.0) -> dict[str, int]:
    """Cluster ids (1-based) per node. Isolated nodes get their own cluster.

    Cluster numbering is deterministic: clusters ordered by size descending,
    then by smallest member label.
    """
    nodes = sorted(node_labels)
    m = float(sum(edges.values()))
    if m == 0:
        return {n: i + 1 for i, n in enumerate(nodes)}

    degree: dict[str, float] = {n: 0.0 for n in nodes}
    for (a, b), w in edges.items():
        degree[a] += w
        degree[b] += w

    # community name = smallest member label
    members: dict[str, set[str]] = {n: {n} for n in nodes}
    total_degree: dict[str, float] = dict(degree)
    between: dict[tuple[str, str], float] = {}
    for (a, b), w in edges.items():
        if a == b:
            continue
        pair = (a, b) if a < b else (b, a)
        between[pair] = between.get(pair, 0.0) + w

    while between:
        best_pair = None
        best_gain = 0.0
        for pair in sorted(between):
            c1, c2 = pair
            gain = (between[pair] / m
                    - resolution * total_degree[c1] * total_degree[c2]
                    / (2 * m * m))
            if gain > best_gain + _EPS:
                best_gain = gain
                best_pair = pair
        if best_pair is None:
            break
        c1, c2 = best_pair  # c1 < c2: merge c2 into c1
        members[c1] |= members.pop(c2)
        total_degree[c1] += total_degree.pop(c2)
        merged: dict[tuple[str, str], float] = {}
        for (a, b), w in between.items():
            if (a, b) == best_pair:
                continue
            a2 = c1 if a == c2 else a
            b2 = c1 if b == c2 else b
            pair = (a2, b2) if a2 < b2 else (b2, a2)
            merged[pair] = merged.get(pair, 0.0) + w
        between = merged

    ordered = sorted(members.values(), key=lambda ms: (-len(ms), min(ms)))
    assignment: dict[str, int] = {}
    for cluster_id, group in enumerate(ordered, start=1):
        for node in group:
            assignment[node] = cluster_id
    return assignment
