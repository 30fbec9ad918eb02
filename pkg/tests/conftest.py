import pytest

from tensorhop.graph import Graph, parse_edge_list

# Four-cycle 0-1-3-2 with a pendant node 4 on node 3.  Between nodes 0 and 4
# there are exactly two length-3 simple paths, (0,1,3,4) and (0,2,3,4), so the
# occurrence fiber at (0, 4) is (2, 1, 1, 2, 2) and its sum is 8.
C4_TAIL_TEXT = "0 1\n0 2\n1 3\n2 3\n3 4\n"


@pytest.fixture
def c4_tail() -> Graph:
    return parse_edge_list(C4_TAIL_TEXT)


@pytest.fixture
def path3() -> Graph:
    return Graph.from_edges([(0, 1), (1, 2)])


@pytest.fixture
def triangle() -> Graph:
    return Graph.from_edges([(0, 1), (1, 2), (0, 2)])
