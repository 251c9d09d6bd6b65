"""Shared builders and independent oracles for the test suite."""

from __future__ import annotations

import numpy as np

from parth import NodeMap, SparsityPattern, SymGraph, build_dual


def pattern_from_edges(n: int, edges, diagonal: bool = True) -> SparsityPattern:
    """Symmetric pattern from an undirected edge list."""
    eu = [e[0] for e in edges]
    ev = [e[1] for e in edges]
    rows = eu + ev
    cols = ev + eu
    if diagonal:
        rows += list(range(n))
        cols += list(range(n))
    return SparsityPattern.from_coo(n, np.array(rows, np.int64), np.array(cols, np.int64))


def arrowhead_pattern(n: int) -> SparsityPattern:
    """Dense first row/column plus the diagonal."""
    return pattern_from_edges(n, [(0, j) for j in range(1, n)])


# Nine-node two-call sequence exercising one coarse re-decomposition: the
# second pattern gains edges (0,6) and (3,8) and loses (2,8).
NINE_EDGES_FIRST = [
    (0, 1), (1, 4),
    (0, 5), (1, 6), (4, 7),
    (0, 2), (1, 3), (4, 8),
    (2, 3), (2, 8),
    (5, 6), (6, 7),
]
NINE_EDGES_SECOND = [e for e in NINE_EDGES_FIRST if e != (2, 8)] + [(0, 6), (3, 8)]

# Hand-built 3-level layout for the sequence above: the root separator
# {0,1,4} splits {5,6,7} from {2,3,8}; {6} splits {5} from {7}; {2} splits
# {3} from {8}.
NINE_TREE_SETS = [[0, 1, 4], [6], [2], [5], [7], [3], [8]]


def nine_node_patterns() -> tuple[SparsityPattern, SparsityPattern]:
    return pattern_from_edges(9, NINE_EDGES_FIRST), pattern_from_edges(9, NINE_EDGES_SECOND)


def nine_node_graphs() -> tuple[SymGraph, SymGraph]:
    p1, p2 = nine_node_patterns()
    return build_dual(p1), build_dual(p2)


def random_pattern(rng: np.random.Generator, n: int, avg_degree: float = 3.0) -> SparsityPattern:
    """Random connected-ish symmetric pattern with a full diagonal."""
    edges = [(int(rng.integers(0, i)), i) for i in range(1, n)]  # random spanning tree
    extra = int(avg_degree * n / 2)
    if extra:
        u = rng.integers(0, n, size=extra)
        v = rng.integers(0, n, size=extra)
        edges += [(int(a), int(b)) for a, b in zip(u, v) if a != b]
    return pattern_from_edges(n, edges)


def pattern_edge_set(pattern: SparsityPattern) -> set[tuple[int, int]]:
    g = build_dual(pattern)
    u, v = g.edges()
    return {(int(a), int(b)) for a, b in zip(u, v)}


def apply_edge_delta(pattern: SparsityPattern, add, remove) -> SparsityPattern:
    """New pattern with off-diagonal pairs added/removed (diagonal kept)."""
    n = pattern.n_rows
    edges = pattern_edge_set(pattern)
    for u, v in remove:
        edges.discard((min(u, v), max(u, v)))
    for u, v in add:
        if u != v:
            edges.add((min(u, v), max(u, v)))
    diag = {int(r) for r, c in zip(*pattern.to_coo()) if r == c}
    rows = [u for u, v in edges] + [v for u, v in edges] + sorted(diag)
    cols = [v for u, v in edges] + [u for u, v in edges] + sorted(diag)
    return SparsityPattern.from_coo(n, np.array(rows, np.int64), np.array(cols, np.int64))


def remove_and_add_nodes(
    rng: np.random.Generator, pattern: SparsityPattern, n_remove: int, n_add: int
) -> tuple[SparsityPattern, NodeMap]:
    """Node-level delta: drop random nodes, append new ones with random edges."""
    n = pattern.n_rows
    n_remove = min(n_remove, n - 2)
    removed = set(map(int, rng.choice(n, size=n_remove, replace=False))) if n_remove else set()
    survivors = [i for i in range(n) if i not in removed]
    new_of_old = {old: new for new, old in enumerate(survivors)}
    n_new = len(survivors) + n_add

    edges = []
    for u, v in zip(*build_dual(pattern).edges()):
        u, v = int(u), int(v)
        if u in new_of_old and v in new_of_old:
            edges.append((new_of_old[u], new_of_old[v]))
    for j in range(n_add):
        u = len(survivors) + j
        n_links = int(rng.integers(1, 4))
        targets = rng.integers(0, u, size=n_links)  # earlier nodes only
        edges += [(int(t), u) for t in targets]

    entries = survivors + [-1] * n_add
    return pattern_from_edges(n_new, edges), NodeMap(np.array(entries, np.int64))


def dense_fill_nnz(n: int, edges, perm) -> int:
    """Independent fill oracle: right-looking elimination on a dense bitmap."""
    A = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        A[u, v] = A[v, u] = True
    perm = np.asarray(perm)
    B = A[np.ix_(perm, perm)]
    nnz = 0
    for k in range(n):
        below = np.flatnonzero(B[k, k + 1 :]) + k + 1
        nnz += 1 + below.size
        if below.size:
            B[np.ix_(below, below)] = True
    return nnz
