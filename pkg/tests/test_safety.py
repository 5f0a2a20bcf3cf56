import random

import pytest

from flowsafe import Path, SafetyWindow, excess_flow, is_w_safe, verify_path
from flowsafe.decompose import peel_decomposition
from flowsafe.io_formats import gen_random_instance


def path(graph, *vertices):
    return Path.from_vertices(graph, vertices)


class TestExcessFlow:
    def test_g0_values(self, g0):
        assert excess_flow(g0, path(g0, 0, 1, 3)) == 2
        assert excess_flow(g0, path(g0, 0, 1, 2, 3)) == 1
        assert excess_flow(g0, path(g0, 0, 2, 3)) == 2

    def test_single_edge_is_its_weight(self, g0):
        for i, e in enumerate(g0.edges):
            assert excess_flow(g0, Path((i,))) == e.weight

    def test_g1_zero_excess(self, g1):
        assert excess_flow(g1, path(g1, 1, 3, 4)) == 0

    def test_full_g1_paths_have_zero_excess(self, g1):
        assert excess_flow(g1, path(g1, 0, 1, 3, 4, 6)) == 0

    def test_can_go_negative(self):
        from flowsafe import FlowGraph
        g = FlowGraph(7, [(0, 1, 1), (0, 2, 3), (1, 3, 1), (2, 3, 3),
                          (3, 4, 3), (3, 5, 1), (4, 6, 3), (5, 6, 1)])
        assert excess_flow(g, path(g, 1, 3, 5)) == -2

    def test_diverging_equals_converging(self):
        rng = random.Random(13)
        checked = 0
        for seed in range(60):
            graph = gen_random_instance(3, 6, seed, max_weight=4).graph
            for wp in peel_decomposition(graph).paths:
                edges = wp.path.edges
                for _ in range(4):
                    i = rng.randrange(len(edges))
                    j = rng.randrange(i, len(edges))
                    sub = Path(edges[i:j + 1])
                    d = excess_flow(graph, sub, "diverging")
                    c = excess_flow(graph, sub, "converging")
                    assert d == c
                    checked += 1
        assert checked > 100

    def test_non_contiguous_path_rejected(self, g0):
        with pytest.raises(ValueError):
            excess_flow(g0, Path((0, 4)))

    def test_antitone_under_extension(self):
        for seed in range(40):
            graph = gen_random_instance(3, 6, seed, max_weight=4).graph
            for wp in peel_decomposition(graph).paths:
                edges = wp.path.edges
                for end in range(1, len(edges)):
                    shorter = excess_flow(graph, Path(edges[:end]))
                    longer = excess_flow(graph, Path(edges[:end + 1]))
                    assert longer <= shorter


class TestIsWSafe:
    def test_g0_examples(self, g0):
        p = path(g0, 0, 1, 3)
        assert is_w_safe(g0, p, 2)
        assert not is_w_safe(g0, p, 3)

    def test_g1_zero_excess_is_unsafe(self, g1):
        assert not is_w_safe(g1, path(g1, 1, 3, 4), 1)

    def test_nonpositive_w_rejected(self, g0):
        p = path(g0, 0, 1, 3)
        with pytest.raises(ValueError):
            is_w_safe(g0, p, 0)
        with pytest.raises(ValueError):
            is_w_safe(g0, p, -1)


class TestVerifyPath:
    def test_g0(self, g0):
        assert verify_path(g0, path(g0, 0, 2, 3)) == (True, 2)

    def test_g1_unsafe(self, g1):
        assert verify_path(g1, path(g1, 1, 3, 4)) == (False, 0)

    def test_single_edge(self, g0):
        assert verify_path(g0, Path((1,))) == (True, 2)


class TestSafetyWindow:
    def test_extend_right_through_branching_vertex(self, g0):
        host = path(g0, 0, 1, 2, 3)
        w = SafetyWindow.single_edge(g0, host, 0)
        assert w.excess == 3
        w = w.extend_right()
        # appending (u, v) drops the excess by f_out(u) - f(u, v) = 3 - 1
        assert (w.left, w.right, w.excess) == (0, 1, 1)

    def test_extend_right_matches_excess_flow(self, g0):
        host = path(g0, 0, 1, 3)
        w = SafetyWindow.single_edge(g0, host, 0).extend_right()
        assert w.excess == 2
        assert w.excess == excess_flow(g0, w.path())

    def test_extend_through_unique_out_edge_keeps_excess(self):
        g = gen_random_instance(1, 4, 3, max_weight=5).graph  # one long chain
        host = peel_decomposition(g).paths[0].path
        w = SafetyWindow.single_edge(g, host, 0)
        while w.right + 1 < len(host.edges):
            before = w.excess
            w = w.extend_right()
            assert w.excess == before

    def test_shrink_left_examples(self, g0, g1):
        w = SafetyWindow.from_span(g0, path(g0, 0, 1, 2, 3), 0, 2)
        assert w.excess == 1
        w = w.shrink_left()
        # removed (s, u) with f_in(u) == f(s, u); excess unchanged
        assert (w.left, w.right, w.excess) == (1, 2, 1)
        assert w.excess == excess_flow(g0, w.path())

        w1 = SafetyWindow.from_span(g1, path(g1, 0, 1, 3), 0, 1)
        assert w1.excess == 2
        w1 = w1.shrink_left()
        assert w1.excess == 2  # single edge (a, c) of weight 2

    def test_extend_past_host_end_fails(self, g0):
        host = path(g0, 0, 1, 3)
        w = SafetyWindow.from_span(g0, host, 0, 1)
        with pytest.raises(ValueError):
            w.extend_right()

    def test_extend_with_wrong_edge_fails(self, g0):
        host = path(g0, 0, 1, 2, 3)
        w = SafetyWindow.single_edge(g0, host, 0)
        with pytest.raises(ValueError):
            w.extend_right(edge_id=1)  # host continues with edge 2, not 1

    def test_shrink_single_edge_fails(self, g0):
        w = SafetyWindow.single_edge(g0, path(g0, 0, 1, 3), 0)
        with pytest.raises(ValueError):
            w.shrink_left()

    def test_random_walks_reproduce_excess_flow_exactly(self):
        rng = random.Random(17)
        for seed in range(30):
            graph = gen_random_instance(3, 6, seed, max_weight=4).graph
            for wp in peel_decomposition(graph).paths:
                host = wp.path
                w = SafetyWindow.single_edge(graph, host, 0)
                for _ in range(30):
                    can_extend = w.right + 1 < len(host.edges)
                    can_shrink = w.left < w.right
                    if not (can_extend or can_shrink):
                        break
                    if can_extend and (not can_shrink or rng.random() < 0.6):
                        w = w.extend_right()
                    else:
                        w = w.shrink_left()
                    assert w.excess == excess_flow(graph, w.path())
