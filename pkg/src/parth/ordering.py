"""Per-sub-graph fill-reducing ordering engines.

The default is exact minimum-degree elimination with ties broken by lowest
node index; external libraries can be dropped in through the same engine
interface. Permutations follow the convention perm[new_position] = old_index.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidPermutation
from .graph import SymGraph

# Above this size the dense elimination bitmap would get heavy; fall back to sets.
_DENSE_LIMIT = 2048


def is_permutation(perm: np.ndarray, n: int) -> bool:
    perm = np.asarray(perm)
    if perm.shape != (n,):
        return False
    seen = np.zeros(n, dtype=bool)
    ok = (perm >= 0) & (perm < n)
    if not np.all(ok):
        return False
    seen[perm] = True
    return bool(np.all(seen))


def invert_permutation(perm: np.ndarray) -> np.ndarray:
    perm = np.asarray(perm, dtype=np.int64)
    n = perm.size
    if not is_permutation(perm, n):
        raise InvalidPermutation("array is not a bijection")
    inv = np.empty(n, dtype=np.int64)
    inv[perm] = np.arange(n, dtype=np.int64)
    return inv


def _min_degree_dense(g: SymGraph) -> np.ndarray:
    """Exact minimum degree on a dense boolean elimination graph."""
    n = g.n_nodes
    adj = np.zeros((n, n), dtype=bool)
    u, v = g.edges()
    adj[u, v] = True
    adj[v, u] = True
    deg = adj.sum(axis=1).astype(np.int64)
    gone = n + 1  # sentinel larger than any live degree
    perm = np.empty(n, dtype=np.int64)
    for k in range(n):
        pivot = int(np.argmin(deg))  # first minimum = lowest index
        perm[k] = pivot
        nbrs = np.flatnonzero(adj[pivot])
        adj[pivot, :] = False
        adj[:, pivot] = False
        if nbrs.size:
            adj[np.ix_(nbrs, nbrs)] = True
            adj[nbrs, nbrs] = False
            deg[nbrs] = adj[nbrs].sum(axis=1)
        deg[pivot] = gone
    return perm


def _min_degree_sets(g: SymGraph) -> np.ndarray:
    """Set-based variant of the same elimination; used for large sub-graphs."""
    n = g.n_nodes
    adj = [set(map(int, g.neighbors(i))) for i in range(n)]
    deg = np.array([len(s) for s in adj], dtype=np.int64)
    gone = n + 1
    perm = np.empty(n, dtype=np.int64)
    for k in range(n):
        pivot = int(np.argmin(deg))
        perm[k] = pivot
        nbrs = adj[pivot]
        for w in nbrs:
            s = adj[w]
            s.discard(pivot)
            s.update(nbrs)
            s.discard(w)
            deg[w] = len(s)
        adj[pivot] = set()
        deg[pivot] = gone
    return perm


class OrderingEngine:
    """Strategy interface: deterministic for a fixed (graph, seed)."""

    name = "abstract"

    def order(self, g: SymGraph, seed: int = 0) -> np.ndarray:
        raise NotImplementedError


class NaturalEngine(OrderingEngine):
    name = "natural"

    def order(self, g: SymGraph, seed: int = 0) -> np.ndarray:
        return np.arange(g.n_nodes, dtype=np.int64)


class MinDegreeEngine(OrderingEngine):
    name = "mindeg"

    def order(self, g: SymGraph, seed: int = 0) -> np.ndarray:
        if g.n_nodes == 0:
            return np.empty(0, dtype=np.int64)
        if g.n_nodes <= _DENSE_LIMIT:
            return _min_degree_dense(g)
        return _min_degree_sets(g)


ORDERINGS = {NaturalEngine.name: NaturalEngine, MinDegreeEngine.name: MinDegreeEngine}


def make_ordering_engine(name: str, **kwargs) -> OrderingEngine:
    try:
        return ORDERINGS[name](**kwargs)
    except KeyError:
        raise ValueError(f"unknown ordering engine {name!r} (available: {sorted(ORDERINGS)})") from None


def order_subgraph(g: SymGraph, engine: OrderingEngine, seed: int = 0) -> np.ndarray:
    perm = engine.order(g, seed)
    if not is_permutation(perm, g.n_nodes):
        raise InvalidPermutation(f"engine {engine.name!r} returned a non-bijective ordering")
    return perm
