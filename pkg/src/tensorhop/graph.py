"""Undirected simple graphs: edge-list parsing, adjacency matrices, exact powers."""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import IntegerOverflowError, ParseError
from .validation import check_square, check_symmetric

_INT64_MAX = np.iinfo(np.int64).max
_DIRECTIVE = re.compile(r"#n\s+(\d+)\s*$")


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on nodes 0..n-1.

    Edges are stored once as (u, v) with u < v; self-loops are rejected.
    Instances are immutable and safe to share across threads.
    """

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("node count must be nonnegative")
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if u > v:
                raise ValueError(f"edge ({u}, {v}) must be stored with u < v")
            if u < 0 or v >= self.n:
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")

    @classmethod
    def from_edges(cls, edges, n: int | None = None) -> "Graph":
        """Build a graph from unordered node pairs, inferring n when omitted."""
        normalized = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            normalized.add((min(u, v), max(u, v)))
        inferred = 1 + max((v for _, v in normalized), default=-1)
        if n is None:
            n = inferred
        elif n < inferred:
            raise ValueError(f"n={n} too small for an edge touching node {inferred - 1}")
        return cls(n=n, edges=frozenset(normalized))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def neighbor_lists(self) -> list[list[int]]:
        """Adjacency lists with neighbors in ascending id order."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for lst in adj:
            lst.sort()
        return adj


def parse_edge_list(text: str | bytes) -> Graph:
    """Parse the edge-list format.

    One edge per line as two whitespace-separated nonnegative integers.
    Blank lines and '#' comments are ignored.  A "#n <count>" header declares
    trailing isolated nodes; it can only raise the inferred node count.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    declared: int | None = None
    edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            match = _DIRECTIVE.match(line)
            if match:
                value = int(match.group(1))
                declared = value if declared is None else max(declared, value)
            elif re.match(r"#n\b", line):
                raise ParseError("malformed '#n <count>' directive", line=lineno)
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"expected two node ids, got {line!r}", line=lineno)
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(f"non-integer token in {line!r}", line=lineno) from None
        if u < 0 or v < 0:
            raise ParseError(f"negative node id in {line!r}", line=lineno)
        if u == v:
            raise ParseError(f"self-loop on node {u}", line=lineno)
        edges.add((min(u, v), max(u, v)))
    if not edges and declared is None:
        raise ParseError("no edges")
    n = 1 + max((v for _, v in edges), default=-1)
    if declared is not None:
        n = max(n, declared)
    return Graph(n=n, edges=frozenset(edges))


def serialize_edge_list(g: Graph) -> str:
    """Inverse of parse_edge_list: '#n' header followed by sorted edges."""
    lines = [f"#n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"


def adjacency(g: Graph) -> np.ndarray:
    """Dense n x n 0/1 adjacency matrix (int64, symmetric, zero diagonal)."""
    a = np.zeros((g.n, g.n), dtype=np.int64)
    for u, v in g.edges:
        a[u, v] = 1
        a[v, u] = 1
    return a


def _checked_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # conservative: every entry of a @ b is bounded by k * max|a| * max|b|
    k = a.shape[1]
    bound = k * int(np.abs(a).max(initial=0)) * int(np.abs(b).max(initial=0))
    if bound > _INT64_MAX:
        raise IntegerOverflowError("integer matrix product may exceed the 64-bit carrier")
    return a @ b


def matrix_power(a, exponent: int) -> np.ndarray:
    """Exact integer matrix power by repeated squaring; exponent 0 gives identity.

    Raises IntegerOverflowError instead of wrapping when entries could leave
    the int64 range.
    """
    a = check_square(np.asarray(a), "matrix")
    if not np.issubdtype(a.dtype, np.integer):
        raise TypeError("matrix_power expects an integer matrix")
    if exponent < 0:
        raise ValueError("exponent must be nonnegative")
    base = a.astype(np.int64)
    result = np.eye(base.shape[0], dtype=np.int64)
    e = exponent
    while e > 0:
        if e & 1:
            result = _checked_matmul(result, base)
        e >>= 1
        if e:
            base = _checked_matmul(base, base)
    return result


def normalize_sym(a) -> np.ndarray:
    """Symmetrically normalized operator D^{-1/2} (A + I) D^{-1/2}.

    The added self-loop keeps isolated nodes well defined (their degree
    becomes 1).
    """
    a = check_symmetric(np.asarray(a), "adjacency")
    with_loops = a.astype(np.float64) + np.eye(a.shape[0])
    inv_sqrt = 1.0 / np.sqrt(with_loops.sum(axis=1))
    return with_loops * inv_sqrt[:, None] * inv_sqrt[None, :]
