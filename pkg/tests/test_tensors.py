import networkx as nx
import numpy as np
import pytest

from helpers import graph_sweep, walk_occurrence_fiber
from tensorhop.errors import ResourceLimitError
from tensorhop.graph import Graph, adjacency, matrix_power
from tensorhop.tensors import (
    Semantics,
    build_simple_path_tensor,
    build_walk_tensor,
    check_occurrence_sum,
    count_matrix,
    enumerate_simple_paths,
    multiset_cardinality,
    normalize_tensor,
    simple_path_count_matrix,
    sum_reduce_fiber,
    verify_graph_identities,
)


def nx_simple_paths(g: Graph, i: int, j: int, length: int) -> set[tuple[int, ...]]:
    """networkx oracle: node-distinct paths with exactly `length` edges."""
    ng = nx.Graph()
    ng.add_nodes_from(range(g.n))
    ng.add_edges_from(g.edges)
    return {
        tuple(p)
        for p in nx.all_simple_paths(ng, i, j, cutoff=length)
        if len(p) == length + 1
    }


class TestEnumerateSimplePaths:
    def test_fixture_pair(self, c4_tail):
        result = enumerate_simple_paths(c4_tail, 0, 4, 3)
        assert result.paths == ((0, 1, 3, 4), (0, 2, 3, 4))

    def test_path3(self, path3):
        assert enumerate_simple_paths(path3, 0, 2, 2).paths == ((0, 1, 2),)
        assert enumerate_simple_paths(path3, 0, 2, 1).paths == ()

    def test_matches_networkx(self):
        for g in graph_sweep(8):
            if g.n > 6:
                continue
            for length in range(1, 5):
                for i in range(g.n):
                    for j in range(i + 1, g.n):
                        ours = set(enumerate_simple_paths(g, i, j, length).paths)
                        assert ours == nx_simple_paths(g, i, j, length)

    def test_paths_are_node_distinct_and_sorted_deterministically(self, c4_tail):
        result = enumerate_simple_paths(c4_tail, 0, 4, 3)
        for p in result.paths:
            assert len(set(p)) == len(p)
        assert list(result.paths) == sorted(result.paths)

    def test_closed_pair_rejected(self, triangle):
        with pytest.raises(ValueError, match="closed simple paths"):
            enumerate_simple_paths(triangle, 1, 1, 2)

    def test_cap(self, c4_tail):
        with pytest.raises(ResourceLimitError):
            enumerate_simple_paths(c4_tail, 0, 4, 3, cap=3)


class TestSimplePathTensor:
    def test_fixture_fiber(self, c4_tail):
        tensor = build_simple_path_tensor(c4_tail, 3)
        assert np.array_equal(tensor.fiber(0, 4), [2, 1, 1, 2, 2])

    def test_path3_fiber(self, path3):
        tensor = build_simple_path_tensor(path3, 2)
        assert np.array_equal(tensor.fiber(0, 2), [1, 1, 1])

    def test_diagonal_zero_for_positive_length(self, triangle):
        tensor = build_simple_path_tensor(triangle, 2)
        assert np.array_equal(tensor.fiber(0, 0), [0, 0, 0])

    def test_length_zero_structure(self, c4_tail):
        tensor = build_simple_path_tensor(c4_tail, 0)
        assert int(np.count_nonzero(tensor.values)) == c4_tail.n
        for i in range(c4_tail.n):
            assert tensor.values[i, i, i] == 1

    def test_symmetry_sweep(self):
        for g in graph_sweep(6):
            for length in range(4):
                tensor = build_simple_path_tensor(g, length)
                assert np.array_equal(tensor.values, tensor.values.transpose(1, 0, 2))

    def test_cap(self, c4_tail):
        with pytest.raises(ResourceLimitError):
            build_simple_path_tensor(c4_tail, 2, cap=4)


class TestWalkTensor:
    def test_triangle_closed_fiber(self, triangle):
        tensor = build_walk_tensor(triangle, 2)
        assert np.array_equal(tensor.fiber(0, 0), [4, 1, 1])

    def test_path3_fiber(self, path3):
        tensor = build_walk_tensor(path3, 2)
        assert np.array_equal(tensor.fiber(0, 2), [1, 1, 1])

    def test_length_zero(self, c4_tail):
        tensor = build_walk_tensor(c4_tail, 0)
        assert int(np.count_nonzero(tensor.values)) == c4_tail.n
        for i in range(c4_tail.n):
            assert tensor.values[i, i, i] == 1

    def test_fiber_sums_recover_power(self):
        for g in graph_sweep(6):
            a = adjacency(g)
            for length in range(5):
                tensor = build_walk_tensor(g, length)
                expected = (length + 1) * matrix_power(a, length)
                assert np.array_equal(tensor.values.sum(axis=2), expected)

    def test_matches_walk_enumeration(self, c4_tail, triangle):
        for g in (c4_tail, triangle):
            for length in range(4):
                tensor = build_walk_tensor(g, length)
                for i in range(g.n):
                    for j in range(g.n):
                        oracle = walk_occurrence_fiber(g, i, j, length)
                        assert np.array_equal(tensor.fiber(i, j), oracle)

    def test_symmetry_sweep(self):
        for g in graph_sweep(6):
            for length in range(4):
                tensor = build_walk_tensor(g, length)
                assert np.array_equal(tensor.values, tensor.values.transpose(1, 0, 2))


class TestNormalize:
    def test_fixture_entry(self, c4_tail):
        tensor = normalize_tensor(build_simple_path_tensor(c4_tail, 3))
        assert tensor.values[0, 4, 3] == 0.5
        assert tensor.semantics is Semantics.SIMPLE_PATH

    def test_length_zero_unchanged(self, c4_tail):
        raw = build_walk_tensor(c4_tail, 0)
        tensor = normalize_tensor(raw)
        assert np.array_equal(tensor.values, raw.values.astype(float))

    def test_path3_entry(self, path3):
        tensor = normalize_tensor(build_walk_tensor(path3, 2))
        assert tensor.values[0, 2, 1] == pytest.approx(1.0 / 3.0, abs=1e-15)

    def test_rescaling_recovers_integers(self):
        for g in graph_sweep(4):
            for length in range(4):
                raw = build_walk_tensor(g, length)
                tensor = normalize_tensor(raw)
                rescaled = (length + 1) * tensor.values
                assert np.max(np.abs(rescaled - raw.values)) < 1e-9
                assert np.array_equal(np.rint(rescaled).astype(np.int64), raw.values)


class TestMultisetCardinality:
    def test_fixture(self, c4_tail):
        assert multiset_cardinality(c4_tail, 0, 4, 3) == 8

    def test_path3(self, path3):
        assert multiset_cardinality(path3, 0, 2, 2) == 3
        assert multiset_cardinality(path3, 0, 2, 1) == 0


class TestOccurrenceSumIdentity:
    def test_fixture(self, c4_tail):
        report = check_occurrence_sum(c4_tail, 0, 4, 3)
        assert report.ok
        assert report.lhs == 8
        assert report.rhs == 8

    def test_sweep(self):
        for g in graph_sweep(8):
            for length in range(1, 5):
                tensor = build_simple_path_tensor(g, length)
                for i in range(g.n):
                    for j in range(g.n):
                        if i != j:
                            assert check_occurrence_sum(g, i, j, length, tensor=tensor).ok

    def test_edgeless(self):
        g = Graph.from_edges([], n=3)
        report = check_occurrence_sum(g, 0, 2, 1)
        assert report.ok and report.lhs == 0 and report.rhs == 0


class TestSumReduceFiber:
    def test_fixture_walk(self, c4_tail):
        tensor = normalize_tensor(build_walk_tensor(c4_tail, 3))
        assert sum_reduce_fiber(tensor, 0, 4) == pytest.approx(2.0, abs=1e-9)

    def test_fixture_simple(self, c4_tail):
        tensor = normalize_tensor(build_simple_path_tensor(c4_tail, 3))
        assert sum_reduce_fiber(tensor, 0, 4) == pytest.approx(2.0, abs=1e-9)

    def test_triangle_closed_walks(self, triangle):
        tensor = normalize_tensor(build_walk_tensor(triangle, 2))
        assert sum_reduce_fiber(tensor, 0, 0) == pytest.approx(2.0, abs=1e-9)

    def test_length_zero_diagonal(self, path3):
        tensor = normalize_tensor(build_walk_tensor(path3, 0))
        assert sum_reduce_fiber(tensor, 1, 1) == pytest.approx(1.0, abs=1e-12)

    def test_simple_semantics_matches_dfs_counts(self):
        for g in graph_sweep(6):
            for length in range(4):
                tensor = normalize_tensor(build_simple_path_tensor(g, length))
                counts = simple_path_count_matrix(g, length)
                for i in range(g.n):
                    for j in range(g.n):
                        assert sum_reduce_fiber(tensor, i, j) == pytest.approx(
                            counts[i, j], abs=1e-9
                        )


class TestCountMatrices:
    def test_simple_path_counts(self, path3):
        expected = [[0, 0, 1], [0, 0, 0], [1, 0, 0]]
        assert np.array_equal(simple_path_count_matrix(path3, 2), expected)

    def test_length_zero_identity(self, c4_tail):
        assert np.array_equal(simple_path_count_matrix(c4_tail, 0), np.eye(5, dtype=int))

    def test_walk_count_matrix(self, c4_tail):
        expected = matrix_power(adjacency(c4_tail), 3)
        assert np.array_equal(count_matrix(c4_tail, 3, Semantics.WALK), expected)


class TestVerifySweep:
    def test_fixture_all_pass(self, c4_tail):
        result = verify_graph_identities(c4_tail, 4)
        assert result.ok
        assert result.occurrence_checks == 5 * 20  # 20 ordered pairs, L in 0..4
        assert result.recovery_simple_checks == 5 * 25
        assert result.recovery_walk_checks == 5 * 25

    def test_edgeless(self):
        result = verify_graph_identities(Graph.from_edges([], n=3), 2)
        assert result.ok
