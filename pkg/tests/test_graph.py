import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import count_walks, graph_sweep
from tensorhop.errors import IntegerOverflowError, ParseError
from tensorhop.graph import (
    Graph,
    adjacency,
    matrix_power,
    normalize_sym,
    parse_edge_list,
    serialize_edge_list,
)


class TestParse:
    def test_two_edges(self):
        g = parse_edge_list("0 1\n1 2")
        assert g.n == 3
        assert g.edges == frozenset({(0, 1), (1, 2)})

    def test_duplicates_and_orientation_collapse(self):
        g = parse_edge_list("0 1\n1 0\n0 1")
        assert g.n == 2
        assert g.edges == frozenset({(0, 1)})

    def test_fixture_graph(self, c4_tail):
        assert c4_tail.n == 5
        assert c4_tail.edges == frozenset({(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)})

    def test_comments_and_blank_lines(self):
        g = parse_edge_list("# a comment\n\n0 1\n\n# another\n1 2\n")
        assert g.n == 3

    def test_node_count_directive_raises_n(self):
        g = parse_edge_list("#n 7\n0 1\n")
        assert g.n == 7
        assert g.num_edges == 1

    def test_directive_never_lowers_n(self):
        g = parse_edge_list("#n 2\n0 5\n")
        assert g.n == 6

    def test_directive_alone_gives_edgeless_graph(self):
        g = parse_edge_list("#n 3\n")
        assert g.n == 3
        assert g.num_edges == 0

    def test_malformed_directive(self):
        with pytest.raises(ParseError):
            parse_edge_list("#n abc\n0 1\n")

    def test_self_loop_rejected_with_line_number(self):
        with pytest.raises(ParseError) as excinfo:
            parse_edge_list("0 1\n2 2\n")
        assert excinfo.value.line == 2
        assert "self-loop" in str(excinfo.value)

    def test_non_integer_token(self):
        with pytest.raises(ParseError) as excinfo:
            parse_edge_list("0 x\n")
        assert excinfo.value.line == 1

    def test_wrong_token_count(self):
        with pytest.raises(ParseError):
            parse_edge_list("0 1 2\n")
        with pytest.raises(ParseError):
            parse_edge_list("0\n")

    def test_negative_id(self):
        with pytest.raises(ParseError):
            parse_edge_list("-1 2\n")

    def test_empty_input(self):
        with pytest.raises(ParseError, match="no edges"):
            parse_edge_list("")
        with pytest.raises(ParseError, match="no edges"):
            parse_edge_list("# only a comment\n")


class TestRoundTrip:
    def test_explicit(self, c4_tail):
        assert parse_edge_list(serialize_edge_list(c4_tail)) == c4_tail

    def test_isolated_nodes_survive(self):
        g = Graph.from_edges([(0, 1)], n=5)
        assert parse_edge_list(serialize_edge_list(g)) == g

    @settings(max_examples=50, deadline=None)
    @given(st.data())
    def test_random_graphs(self, data):
        n = data.draw(st.integers(1, 10))
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
        g = Graph.from_edges(chosen, n=n)
        assert parse_edge_list(serialize_edge_list(g)) == g


class TestGraphType:
    def test_self_loop_rejected(self):
        with pytest.raises(ValueError):
            Graph.from_edges([(1, 1)])

    def test_endpoint_out_of_range(self):
        with pytest.raises(ValueError):
            Graph(n=2, edges=frozenset({(0, 3)}))

    def test_neighbor_lists_sorted(self, c4_tail):
        assert c4_tail.neighbor_lists() == [[1, 2], [0, 3], [0, 3], [1, 2, 4], [3]]


class TestAdjacency:
    def test_path3(self, path3):
        assert np.array_equal(adjacency(path3), [[0, 1, 0], [1, 0, 1], [0, 1, 0]])

    def test_triangle(self, triangle):
        assert np.array_equal(adjacency(triangle), [[0, 1, 1], [1, 0, 1], [1, 1, 0]])

    def test_edgeless(self):
        assert np.array_equal(adjacency(Graph.from_edges([], n=2)), [[0, 0], [0, 0]])

    def test_symmetric_zero_diagonal_sweep(self):
        for g in graph_sweep(8):
            a = adjacency(g)
            assert np.array_equal(a, a.T)
            assert not a.diagonal().any()


class TestMatrixPower:
    def test_power_zero_is_identity(self, c4_tail):
        a = adjacency(c4_tail)
        assert np.array_equal(matrix_power(a, 0), np.eye(5, dtype=np.int64))

    def test_path3_squared(self, path3):
        a = adjacency(path3)
        assert np.array_equal(matrix_power(a, 2), [[1, 0, 1], [0, 2, 0], [1, 0, 1]])

    def test_fixture_cube_entry(self, c4_tail):
        a = adjacency(c4_tail)
        assert matrix_power(a, 3)[0, 4] == 2

    def test_multiplicativity(self):
        for g in graph_sweep(6):
            a = adjacency(g)
            for l1 in range(4):
                for l2 in range(4):
                    lhs = matrix_power(a, l1 + l2)
                    rhs = matrix_power(a, l1) @ matrix_power(a, l2)
                    assert np.array_equal(lhs, rhs)

    def test_counts_walks(self):
        for g in graph_sweep(6):
            if g.n > 6:
                continue
            a = adjacency(g)
            for length in range(5):
                power = matrix_power(a, length)
                for i in range(g.n):
                    for j in range(g.n):
                        assert power[i, j] == count_walks(g, i, j, length)

    def test_overflow_raises_instead_of_wrapping(self):
        complete = Graph.from_edges(
            [(u, v) for u in range(30) for v in range(u + 1, 30)]
        )
        a = adjacency(complete)
        with pytest.raises(IntegerOverflowError):
            matrix_power(a, 64)

    def test_negative_exponent(self, path3):
        with pytest.raises(ValueError):
            matrix_power(adjacency(path3), -1)

    def test_float_matrix_rejected(self):
        with pytest.raises(TypeError):
            matrix_power(np.eye(2), 2)


class TestNormalizeSym:
    def test_single_edge(self):
        a = adjacency(Graph.from_edges([(0, 1)]))
        expected = np.full((2, 2), 0.5)
        assert np.allclose(normalize_sym(a), expected, atol=1e-12)

    def test_triangle(self, triangle):
        expected = np.full((3, 3), 1.0 / 3.0)
        assert np.allclose(normalize_sym(adjacency(triangle)), expected, atol=1e-12)

    def test_single_node(self):
        a = adjacency(Graph.from_edges([], n=1))
        assert np.allclose(normalize_sym(a), [[1.0]])

    def test_isolated_node_is_finite(self):
        a = adjacency(Graph.from_edges([(0, 1)], n=3))
        result = normalize_sym(a)
        assert np.all(np.isfinite(result))
        assert result[2, 2] == 1.0

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError):
            normalize_sym(np.array([[0, 1], [0, 0]]))
