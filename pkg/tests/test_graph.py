import random

import pytest

from flowsafe import (
    CycleError,
    FlowGraph,
    Path,
    Transcript,
    aggregates,
    is_funnel,
    sources_and_sinks,
    superimpose,
    validate,
)
from flowsafe.io_formats import gen_random_instance

from conftest import brute_force_is_funnel, random_dag


class TestValidate:
    def test_g0_is_valid(self, g0):
        assert validate(g0) == []

    def test_broken_conservation_reports_both_vertices(self, g0):
        bad = FlowGraph(4, [(0, 1, 3), (1, 3, 2), (1, 2, 2), (0, 2, 2), (2, 3, 3)])
        violations = validate(bad)
        assert len(violations) == 2
        assert {v.where for v in violations} == {"vertex 1", "vertex 2"}
        assert all(v.rule == "conservation" for v in violations)

    def test_single_edge_has_no_internal_vertices(self):
        assert validate(FlowGraph(2, [(0, 1, 5)])) == []

    def test_zero_weight_rejected(self):
        violations = validate(FlowGraph(2, [(0, 1, 0)]))
        assert any(v.rule == "nonpositive weight" for v in violations)

    def test_self_loop_rejected(self):
        violations = validate(FlowGraph(2, [(0, 0, 1)]))
        assert any(v.rule == "self-loop" for v in violations)

    def test_cycle_reported(self):
        violations = validate(FlowGraph(2, [(0, 1, 1), (1, 0, 1)]))
        assert any(v.rule == "cycle" for v in violations)

    def test_endpoint_out_of_range_raises(self):
        with pytest.raises(ValueError):
            FlowGraph(2, [(0, 5, 1)])

    def test_disconnected_components_are_fine(self):
        g = FlowGraph(4, [(0, 1, 1), (2, 3, 7)])
        assert validate(g) == []


class TestAggregates:
    def test_g0_totals(self, g0):
        agg = g0.aggregates()
        assert agg.f_out[0] == 5
        assert agg.f_in[3] == 5
        assert agg.f_in[2] == 3

    def test_single_edge(self):
        agg = FlowGraph(2, [(0, 1, 5)]).aggregates()
        assert agg.f_out[0] == 5
        assert agg.f_in[0] == 0

    def test_cycle_rejected(self, g0):
        cyclic = FlowGraph(4, list(g0.edges) + [(3, 0, 5)])
        with pytest.raises(CycleError):
            aggregates(cyclic)

    def test_topo_order_ties_break_by_vertex_id(self):
        # 0 and 1 are both sources into 2; 0 must come first
        g = FlowGraph(3, [(1, 2, 1), (0, 2, 1)])
        assert g.aggregates().topo_order == (0, 1, 2)

    def test_topo_order_respects_edges(self):
        rng = random.Random(4)
        for _ in range(50):
            record = gen_random_instance(3, 5, rng.randint(0, 10**6), max_weight=3)
            agg = record.graph.aggregates()
            pos = {v: i for i, v in enumerate(agg.topo_order)}
            assert all(pos[e.tail] < pos[e.head] for e in record.graph.edges)

    def test_overflow_is_a_hard_error(self):
        g = FlowGraph(2, [(0, 1, 2**62), (0, 1, 2**62), (0, 1, 2**62)])
        with pytest.raises(OverflowError):
            aggregates(g)


class TestSourcesAndSinks:
    def test_g0(self, g0):
        assert sources_and_sinks(g0) == ((0,), (3,))

    def test_two_disjoint_edges(self):
        g = FlowGraph(4, [(0, 1, 1), (2, 3, 1)])
        assert sources_and_sinks(g) == ((0, 2), (1, 3))

    def test_isolated_vertex_is_both(self):
        g = FlowGraph(1, [])
        assert sources_and_sinks(g) == ((0,), (0,))

    def test_global_flow_balance(self):
        for seed in range(40):
            record = gen_random_instance(3, 6, seed, max_weight=4)
            agg = record.graph.aggregates()
            src, snk = sources_and_sinks(record.graph)
            assert sum(agg.f_out[v] for v in src) == sum(agg.f_in[v] for v in snk)


class TestIsFunnel:
    def test_g0_is_funnel(self, g0):
        assert is_funnel(g0)

    def test_g1_is_not(self, g1):
        assert not is_funnel(g1)

    def test_single_path_graph(self):
        g = FlowGraph(4, [(0, 1, 2), (1, 2, 2), (2, 3, 2)])
        assert is_funnel(g)

    def test_agrees_with_private_edge_brute_force(self):
        rng = random.Random(7)
        for _ in range(300):
            g = random_dag(rng, parallel=True)
            assert is_funnel(g) == brute_force_is_funnel(g), g.edges


class TestSuperimpose:
    def test_shared_edges_sum(self):
        g = superimpose([Transcript((0, 1, 2), 2), Transcript((0, 1, 3), 1)])
        weight = {(e.tail, e.head): e.weight for e in g.edges}
        assert weight[(0, 1)] == 3
        assert weight[(4, 0)] == 3  # global source feeds the shared start
        assert weight[(2, 5)] == 2 and weight[(3, 5)] == 1
        assert g.aux_vertices == frozenset({4, 5})
        assert validate(g) == []

    def test_single_transcript_gives_funnel(self):
        g = superimpose([Transcript((0, 1, 2), 7)])
        assert validate(g) == []
        assert is_funnel(g)

    def test_two_crossing_transcripts_rebuild_the_shared_junction(self):
        # same shape as g1: two paths crossing at one vertex
        g = superimpose([Transcript((0, 2, 3), 2), Transcript((1, 2, 4), 2)])
        assert validate(g) == []
        assert not is_funnel(g)
        assert len(g.edges) == 8
        assert all(e.weight == 2 for e in g.edges)

    def test_nonpositive_weight_rejected(self):
        with pytest.raises(ValueError):
            superimpose([Transcript((0, 1), 0)])

    def test_construction_is_always_valid(self):
        rng = random.Random(11)
        for _ in range(60):
            n = rng.randint(1, 4)
            transcripts = []
            for _ in range(n):
                size = rng.randint(1, 5)
                transcripts.append(Transcript(
                    tuple(sorted(rng.sample(range(6), size))), rng.randint(1, 9)))
            assert validate(superimpose(transcripts)) == []


class TestPath:
    def test_vertices(self, g0):
        p = Path.from_edges(g0, (0, 2, 4))
        assert p.vertices(g0) == (0, 1, 2, 3)

    def test_from_vertices_resolves_edges(self, g0):
        assert Path.from_vertices(g0, [0, 1, 3]).edges == (0, 1)

    def test_non_contiguous_rejected(self, g0):
        with pytest.raises(ValueError):
            Path.from_edges(g0, (0, 4))

    def test_missing_edge_rejected(self, g0):
        with pytest.raises(ValueError):
            Path.from_vertices(g0, [0, 3])

    def test_parallel_edges_pick_smallest_id(self):
        g = FlowGraph(2, [(0, 1, 2), (0, 1, 3)])
        assert Path.from_vertices(g, [0, 1]).edges == (0,)
