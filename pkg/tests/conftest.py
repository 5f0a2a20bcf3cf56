import random

import pytest

from flowsafe import FlowGraph, Path
from flowsafe.safepaths import all_st_paths


@pytest.fixture
def g0():
    # s=0, u=1, v=2, t=3; a funnel with three source-to-sink paths
    return FlowGraph(4, [(0, 1, 3), (1, 3, 2), (1, 2, 1), (0, 2, 2), (2, 3, 3)],
                     name="g0")


@pytest.fixture
def g1():
    # s=0, a=1, b=2, c=3, x=4, y=5, t=6; all weights 2; not a funnel
    return FlowGraph(7, [(0, 1, 2), (0, 2, 2), (1, 3, 2), (2, 3, 2),
                         (3, 4, 2), (3, 5, 2), (4, 6, 2), (5, 6, 2)],
                     name="g1")


def vertex_paths(graph, paths):
    return {p.vertices(graph) for p in paths}


def brute_force_is_funnel(graph):
    """Every source-to-sink path owns an edge used by no other such path."""
    paths = [p.edges for p in all_st_paths(graph)]
    for p in paths:
        used_elsewhere = set()
        for q in paths:
            if q is not p:
                used_elsewhere.update(q)
        if not any(e not in used_elsewhere for e in p):
            return False
    return True


def brute_force_widest_bottleneck(graph):
    """Largest bottleneck weight over all source-to-sink paths."""
    best = 0
    for p in all_st_paths(graph):
        best = max(best, min(graph.edges[i].weight for i in p.edges))
    return best


def random_dag(rng, max_vertices=8, max_weight=4, parallel=False):
    """An arbitrary weighted DAG; conservation is NOT guaranteed."""
    n = rng.randint(2, max_vertices)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            copies = rng.choice([0, 0, 1, 1, 1, 2]) if parallel else rng.choice([0, 1])
            for _ in range(copies):
                edges.append((u, v, rng.randint(1, max_weight)))
    if not edges:
        edges.append((0, n - 1, 1))
    return FlowGraph(n, edges)
