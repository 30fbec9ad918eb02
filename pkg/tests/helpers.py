"""Independent brute-force oracles and seeded graph generators for the tests.

These stay deliberately naive (explicit enumeration, recursion) so they are
independent of the implementations they check.
"""

from __future__ import annotations

import numpy as np

from tensorhop.graph import Graph


def count_walks(graph: Graph, i: int, j: int, length: int) -> int:
    """Count length-`length` walks from i to j by explicit recursion."""
    adj = graph.neighbor_lists()

    def rec(u, remaining):
        if remaining == 0:
            return 1 if u == j else 0
        return sum(rec(w, remaining - 1) for w in adj[u])

    return rec(i, length)


def enumerate_walks(graph: Graph, i: int, j: int, length: int) -> list[tuple[int, ...]]:
    """All length-`length` walks from i to j as explicit node sequences."""
    adj = graph.neighbor_lists()
    walks = []
    stack = [(i,)]
    while stack:
        seq = stack.pop()
        if len(seq) == length + 1:
            if seq[-1] == j:
                walks.append(seq)
            continue
        for w in adj[seq[-1]]:
            stack.append(seq + (w,))
    return sorted(walks)


def walk_occurrence_fiber(graph: Graph, i: int, j: int, length: int) -> np.ndarray:
    """Occurrences of every node across all length-L walks i -> j, with repeats."""
    fiber = np.zeros(graph.n, dtype=np.int64)
    for walk in enumerate_walks(graph, i, j, length):
        for node in walk:
            fiber[node] += 1
    return fiber


def random_graph(seed: int, n: int, p: float = 0.4) -> Graph:
    """Seeded Erdos-Renyi graph on n nodes."""
    rng = np.random.Generator(np.random.PCG64(seed))
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(edges, n=n)


def graph_sweep(count: int = 20, p: float = 0.4, seed_base: int = 1000) -> list[Graph]:
    """Deterministic sweep of random graphs with n cycling through 4..8."""
    return [random_graph(seed_base + s, 4 + (s % 5), p) for s in range(count)]
