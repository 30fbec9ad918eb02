"""Path-occurrence tensors under simple-path and walk semantics.

For nodes i, j and a third node k, entry (i, j, k) of the occurrence tensor
counts the length-L simple paths between i and j whose node set contains k
(SIMPLE_PATH), or the total number of visits to k across all length-L walks
from i to j (WALK).  Dividing every entry by L + 1 yields the normalized
tensor whose depth fibers sum back to the plain path or walk count matrix;
that recovery is the identity the verify tooling checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import IntegerOverflowError, ResourceLimitError
from .graph import Graph, adjacency, matrix_power
from .validation import check_node_index

DEFAULT_ENUMERATION_CAP = 64

_INT64_MAX = np.iinfo(np.int64).max


class Semantics(Enum):
    """What the tensor counts: node-distinct paths or free walks."""

    SIMPLE_PATH = "simple"
    WALK = "walk"


@dataclass(frozen=True)
class SimplePathSet:
    """All simple paths of a fixed length between one node pair."""

    source: int
    target: int
    length: int
    paths: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.paths)


@dataclass(frozen=True, eq=False)
class PathTensor:
    """Integer occurrence counts, shape (n, n, n), depth axis = the third node."""

    n: int
    length: int
    semantics: Semantics
    values: np.ndarray = field(repr=False)  # int64, row-major (i, j, k)

    def fiber(self, i: int, j: int) -> np.ndarray:
        """The depth vector at a fixed (i, j) position."""
        return self.values[i, j, :]


@dataclass(frozen=True, eq=False)
class NormalizedTensor:
    """Occurrence counts divided by (length + 1); float64, shape (n, n, n)."""

    n: int
    length: int
    semantics: Semantics
    values: np.ndarray = field(repr=False)

    def fiber(self, i: int, j: int) -> np.ndarray:
        return self.values[i, j, :]


def enumerate_simple_paths(
    g: Graph, i: int, j: int, length: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> SimplePathSet:
    """Exhaustive DFS over node-distinct paths, neighbors in ascending id order.

    The node-count cap bounds the exponential worst case; raise it explicitly
    for larger graphs.
    """
    check_node_index(i, g.n, "source")
    check_node_index(j, g.n, "target")
    if i == j:
        raise ValueError("closed simple paths unsupported")
    if length < 0:
        raise ValueError("path length must be nonnegative")
    if g.n > cap:
        raise ResourceLimitError(
            f"graph has {g.n} nodes, above the enumeration cap of {cap}"
        )
    adj = g.neighbor_lists()
    found: list[tuple[int, ...]] = []
    path = [i]
    on_path = {i}

    def extend(u: int, remaining: int) -> None:
        if remaining == 0:
            if u == j:
                found.append(tuple(path))
            return
        for w in adj[u]:
            # the target can only be the final node of a simple path
            if w in on_path or (w == j and remaining != 1):
                continue
            on_path.add(w)
            path.append(w)
            extend(w, remaining - 1)
            path.pop()
            on_path.remove(w)

    extend(i, length)
    return SimplePathSet(source=i, target=j, length=length, paths=tuple(found))


def build_simple_path_tensor(
    g: Graph, length: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> PathTensor:
    """Occurrence tensor over node-distinct paths.

    Diagonal fibers are zero for length >= 1; at length 0 the only nonzeros
    are (i, i, i) = 1, the one-node path.
    """
    if length < 0:
        raise ValueError("length must be nonnegative")
    if g.n > cap:
        raise ResourceLimitError(
            f"graph has {g.n} nodes, above the enumeration cap of {cap}"
        )
    values = np.zeros((g.n, g.n, g.n), dtype=np.int64)
    if length == 0:
        idx = np.arange(g.n)
        values[idx, idx, idx] = 1
    else:
        for i in range(g.n):
            for j in range(i + 1, g.n):
                for p in enumerate_simple_paths(g, i, j, length, cap=cap).paths:
                    for node in p:
                        values[i, j, node] += 1
                values[j, i, :] = values[i, j, :]
    return PathTensor(n=g.n, length=length, semantics=Semantics.SIMPLE_PATH, values=values)


def build_walk_tensor(g: Graph, length: int) -> PathTensor:
    """Occurrence tensor over walks, via the split-at-k convolution of powers.

    values[i, j, k] = sum over t of (A^t)[i, k] * (A^(length-t))[k, j], i.e.
    the number of visits to k across all length-L walks from i to j, counting
    repeats.  Every fiber sums to (length + 1) * A^length exactly.
    """
    if length < 0:
        raise ValueError("length must be nonnegative")
    a = adjacency(g)
    powers = [matrix_power(a, t) for t in range(length + 1)]
    # every entry is a sum over t of single products, so this bound is tight
    bound = sum(
        int(powers[t].max(initial=0)) * int(powers[length - t].max(initial=0))
        for t in range(length + 1)
    )
    if bound > _INT64_MAX:
        raise IntegerOverflowError("walk occurrence counts exceed the 64-bit carrier")
    values = np.zeros((g.n, g.n, g.n), dtype=np.int64)
    for t in range(length + 1):
        values += np.einsum("ik,kj->ijk", powers[t], powers[length - t])
    return PathTensor(n=g.n, length=length, semantics=Semantics.WALK, values=values)


def normalize_tensor(b: PathTensor) -> NormalizedTensor:
    """Divide every entry by (length + 1), keeping the semantics tag."""
    values = b.values.astype(np.float64) / (b.length + 1)
    return NormalizedTensor(n=b.n, length=b.length, semantics=b.semantics, values=values)


def multiset_cardinality(
    g: Graph, i: int, j: int, length: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> int:
    """Total node occurrences across all simple paths i -> j, multiplicities included."""
    paths = enumerate_simple_paths(g, i, j, length, cap=cap).paths
    return sum(len(p) for p in paths)


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of one identity check, carrying both sides of the equality."""

    ok: bool
    lhs: int
    rhs: int


def check_occurrence_sum(
    g: Graph,
    i: int,
    j: int,
    length: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
    tensor: PathTensor | None = None,
) -> IdentityReport:
    """Check that the path multiset size equals the depth sum of the fiber.

    Pass a prebuilt SIMPLE_PATH tensor to avoid rebuilding it per pair.
    """
    if tensor is None:
        tensor = build_simple_path_tensor(g, length, cap=cap)
    elif tensor.semantics is not Semantics.SIMPLE_PATH or tensor.length != length:
        raise ValueError("tensor does not match the requested check")
    cardinality = multiset_cardinality(g, i, j, length, cap=cap)
    fiber_sum = int(tensor.fiber(i, j).sum())
    return IdentityReport(ok=cardinality == fiber_sum, lhs=cardinality, rhs=fiber_sum)


def sum_reduce_fiber(t: NormalizedTensor, i: int, j: int) -> float:
    """Sum the depth fiber at (i, j); recovers the plain count matrix entry."""
    return float(t.values[i, j, :].sum())


def simple_path_count_matrix(
    g: Graph, length: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> np.ndarray:
    """Exact counts of node-distinct paths; identity at length 0, zero diagonal otherwise."""
    counts = np.zeros((g.n, g.n), dtype=np.int64)
    if length == 0:
        np.fill_diagonal(counts, 1)
        return counts
    for i in range(g.n):
        for j in range(i + 1, g.n):
            c = len(enumerate_simple_paths(g, i, j, length, cap=cap))
            counts[i, j] = c
            counts[j, i] = c
    return counts


def count_matrix(
    g: Graph, length: int, semantics: Semantics, cap: int = DEFAULT_ENUMERATION_CAP
) -> np.ndarray:
    """The matrix a depth-summed tensor recovers: walk counts or simple-path counts."""
    if semantics is Semantics.WALK:
        return matrix_power(adjacency(g), length)
    return simple_path_count_matrix(g, length, cap=cap)


@dataclass(frozen=True)
class VerificationResult:
    """Counters from the identity sweep behind the verify command."""

    occurrence_checks: int
    occurrence_failures: int
    recovery_simple_checks: int
    recovery_simple_failures: int
    recovery_walk_checks: int
    recovery_walk_failures: int

    @property
    def ok(self) -> bool:
        return (
            self.occurrence_failures == 0
            and self.recovery_simple_failures == 0
            and self.recovery_walk_failures == 0
        )


def verify_graph_identities(
    g: Graph, l_max: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> VerificationResult:
    """Run both identity families for every length L <= l_max.

    The occurrence-sum identity compares the simple-path multiset size with
    the depth sum of the occurrence fiber for every ordered pair i != j.  The
    count-recovery identity compares (L+1) times the count matrix with the
    depth sums of the full tensor, under both semantics, in exact integers.
    """
    if l_max < 0:
        raise ValueError("l_max must be nonnegative")
    occ_checks = occ_failures = 0
    rec_checks = {Semantics.SIMPLE_PATH: 0, Semantics.WALK: 0}
    rec_failures = {Semantics.SIMPLE_PATH: 0, Semantics.WALK: 0}
    for length in range(l_max + 1):
        simple = build_simple_path_tensor(g, length, cap=cap)
        walk = build_walk_tensor(g, length)
        for i in range(g.n):
            for j in range(g.n):
                if i == j:
                    continue
                report = check_occurrence_sum(g, i, j, length, cap=cap, tensor=simple)
                occ_checks += 1
                occ_failures += 0 if report.ok else 1
        for semantics, tensor in ((Semantics.SIMPLE_PATH, simple), (Semantics.WALK, walk)):
            expected = (length + 1) * count_matrix(g, length, semantics, cap=cap)
            sums = tensor.values.sum(axis=2)
            rec_checks[semantics] += g.n * g.n
            rec_failures[semantics] += int(np.count_nonzero(sums != expected))
    return VerificationResult(
        occurrence_checks=occ_checks,
        occurrence_failures=occ_failures,
        recovery_simple_checks=rec_checks[Semantics.SIMPLE_PATH],
        recovery_simple_failures=rec_failures[Semantics.SIMPLE_PATH],
        recovery_walk_checks=rec_checks[Semantics.WALK],
        recovery_walk_failures=rec_failures[Semantics.WALK],
    )
