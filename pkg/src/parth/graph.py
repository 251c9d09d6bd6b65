"""Graph-side view of symmetric sparsity patterns.

A square symmetric pattern is read as an undirected graph: one node per
row/column, one edge per off-diagonal nonzero pair. Adjacency is always
stored sorted and deduplicated so that diffs, subgraph extraction and BFS
are deterministic linear scans.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AsymmetricPattern, DimMismatch, IndexOutOfBounds, InvalidMap

ABSENT = -1

_EMPTY = np.empty(0, dtype=np.int64)


def _index_array(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.int64)


def _counts_to_starts(counts: np.ndarray) -> np.ndarray:
    starts = np.zeros(counts.size + 1, dtype=np.int64)
    np.cumsum(counts, out=starts[1:])
    return starts


def _gather_slices(data: np.ndarray, starts: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Concatenate data[starts[i] : starts[i]+counts[i]] for all i, vectorized."""
    total = int(counts.sum())
    if total == 0:
        return _EMPTY
    first = np.cumsum(counts) - counts
    idx = np.arange(total, dtype=np.int64) + np.repeat(starts - first, counts)
    return data[idx]


@dataclass(frozen=True, eq=False)
class SparsityPattern:
    """CSR-style structural pattern of a square matrix.

    Column indices are strictly increasing inside each row. Diagonal entries
    may be present or absent; graph construction ignores them.
    """

    n_rows: int
    row_starts: np.ndarray
    col_indices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "row_starts", _index_array(self.row_starts))
        object.__setattr__(self, "col_indices", _index_array(self.col_indices))
        rs, ci = self.row_starts, self.col_indices
        if rs.shape != (self.n_rows + 1,) or rs[0] != 0 or rs[-1] != ci.size:
            raise IndexOutOfBounds("row_starts is not a valid offset array")
        if np.any(np.diff(rs) < 0):
            raise IndexOutOfBounds("row_starts must be nondecreasing")
        if ci.size:
            if ci.min() < 0 or ci.max() >= self.n_rows:
                raise IndexOutOfBounds("column index outside [0, n_rows)")
            rows = np.repeat(np.arange(self.n_rows, dtype=np.int64), np.diff(rs))
            keys = rows * self.n_rows + ci
            if np.any(np.diff(keys) <= 0):
                raise IndexOutOfBounds("columns must be strictly increasing within rows")
        rs.setflags(write=False)
        ci.setflags(write=False)

    @property
    def nnz(self) -> int:
        return int(self.col_indices.size)

    def row(self, i: int) -> np.ndarray:
        return self.col_indices[self.row_starts[i] : self.row_starts[i + 1]]

    def to_coo(self) -> tuple[np.ndarray, np.ndarray]:
        rows = np.repeat(np.arange(self.n_rows, dtype=np.int64), np.diff(self.row_starts))
        return rows, self.col_indices

    def entry_keys(self) -> np.ndarray:
        rows, cols = self.to_coo()
        return rows * self.n_rows + cols

    @classmethod
    def from_coo(cls, n_rows: int, rows, cols) -> "SparsityPattern":
        rows, cols = _index_array(rows), _index_array(cols)
        if rows.size and (rows.min() < 0 or rows.max() >= n_rows):
            raise IndexOutOfBounds("row index outside [0, n_rows)")
        if cols.size and (cols.min() < 0 or cols.max() >= n_rows):
            raise IndexOutOfBounds("column index outside [0, n_rows)")
        keys = np.unique(rows * np.int64(n_rows) + cols)
        counts = np.bincount(keys // n_rows, minlength=n_rows) if keys.size else np.zeros(n_rows, np.int64)
        return cls(n_rows, _counts_to_starts(counts), keys % n_rows)


def is_structurally_symmetric(pattern: SparsityPattern) -> bool:
    rows, cols = pattern.to_coo()
    n = pattern.n_rows
    return np.array_equal(np.sort(rows * n + cols), np.sort(cols * n + rows))


def require_symmetric(pattern: SparsityPattern) -> None:
    if not is_structurally_symmetric(pattern):
        raise AsymmetricPattern("pattern is not structurally symmetric")


@dataclass(frozen=True, eq=False)
class SymGraph:
    """Undirected graph in compressed adjacency form.

    Neighbor lists are sorted, deduplicated, free of self-loops, and
    symmetric. Instances are immutable and safe to share.
    """

    n_nodes: int
    adj_starts: np.ndarray
    adj: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "adj_starts", _index_array(self.adj_starts))
        object.__setattr__(self, "adj", _index_array(self.adj))
        st, adj = self.adj_starts, self.adj
        if st.shape != (self.n_nodes + 1,) or st[0] != 0 or st[-1] != adj.size:
            raise IndexOutOfBounds("adj_starts is not a valid offset array")
        if adj.size:
            if adj.min() < 0 or adj.max() >= self.n_nodes:
                raise IndexOutOfBounds("neighbor index outside [0, n_nodes)")
            rows = np.repeat(np.arange(self.n_nodes, dtype=np.int64), np.diff(st))
            if np.any(rows == adj):
                raise IndexOutOfBounds("self-loops are not allowed")
            keys = rows * self.n_nodes + adj
            if np.any(np.diff(keys) <= 0):
                raise IndexOutOfBounds("neighbors must be strictly increasing per node")
            if not np.array_equal(np.sort(keys), np.sort(adj * self.n_nodes + rows)):
                raise IndexOutOfBounds("adjacency is not symmetric")
        st.setflags(write=False)
        adj.setflags(write=False)

    @property
    def n_edges(self) -> int:
        return int(self.adj.size) // 2

    def neighbors(self, i: int) -> np.ndarray:
        return self.adj[self.adj_starts[i] : self.adj_starts[i + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.adj_starts)

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """All edges as (u, v) arrays with u < v."""
        rows = np.repeat(np.arange(self.n_nodes, dtype=np.int64), np.diff(self.adj_starts))
        mask = rows < self.adj
        return rows[mask], self.adj[mask]

    def edge_keys(self) -> np.ndarray:
        u, v = self.edges()
        return u * self.n_nodes + v

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        pos = np.searchsorted(nb, v)
        return pos < nb.size and nb[pos] == v

    @classmethod
    def empty(cls, n_nodes: int) -> "SymGraph":
        return cls(n_nodes, np.zeros(n_nodes + 1, np.int64), _EMPTY)

    @classmethod
    def from_edges(cls, n_nodes: int, u, v) -> "SymGraph":
        """Build from an edge list; symmetrizes, deduplicates, drops self-loops."""
        u, v = _index_array(u), _index_array(v)
        if u.size and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n_nodes):
            raise IndexOutOfBounds("edge endpoint outside [0, n_nodes)")
        keep = u != v
        u, v = u[keep], v[keep]
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        keys = np.unique(src * np.int64(n_nodes) + dst)
        counts = np.bincount(keys // n_nodes, minlength=n_nodes) if keys.size else np.zeros(n_nodes, np.int64)
        return cls(n_nodes, _counts_to_starts(counts), keys % n_nodes)


def gather_neighbors(g: SymGraph, nodes: np.ndarray) -> np.ndarray:
    """Concatenated neighbor lists of the given nodes (duplicates kept)."""
    nodes = _index_array(nodes)
    counts = g.adj_starts[nodes + 1] - g.adj_starts[nodes]
    return _gather_slices(g.adj, g.adj_starts[nodes], counts)


def bfs_distances(g: SymGraph, root: int, mask: np.ndarray | None = None) -> np.ndarray:
    """Hop distances from root; -1 for unreachable or masked-out nodes."""
    dist = np.full(g.n_nodes, -1, dtype=np.int64)
    if mask is not None and not mask[root]:
        return dist
    dist[root] = 0
    frontier = np.array([root], dtype=np.int64)
    d = 0
    while frontier.size:
        nb = gather_neighbors(g, frontier)
        if mask is not None:
            nb = nb[mask[nb]]
        nb = nb[dist[nb] < 0]
        if nb.size == 0:
            break
        frontier = np.unique(nb)
        d += 1
        dist[frontier] = d
    return dist


def connected_components(g: SymGraph, mask: np.ndarray | None = None) -> list[np.ndarray]:
    """Components as sorted node arrays, ordered by smallest contained node."""
    visited = np.zeros(g.n_nodes, dtype=bool)
    if mask is not None:
        visited[~mask] = True
    comps = []
    for seed in range(g.n_nodes):
        if visited[seed]:
            continue
        dist = bfs_distances(g, seed, mask=~visited)
        comp = np.flatnonzero(dist >= 0)
        visited[comp] = True
        comps.append(comp)
    return comps


def build_dual(pattern: SparsityPattern) -> SymGraph:
    """Undirected graph sharing the pattern's off-diagonal structure."""
    require_symmetric(pattern)
    rows, cols = pattern.to_coo()
    off = rows != cols
    counts = np.bincount(rows[off], minlength=pattern.n_rows)
    return SymGraph(pattern.n_rows, _counts_to_starts(counts), cols[off])


def compress_by_dim(pattern: SparsityPattern, dim: int) -> SymGraph:
    """Merge each run of `dim` consecutive rows into one graph node.

    Block b covers rows [b*dim, (b+1)*dim); blocks are adjacent when any
    nonzero couples them.
    """
    if dim < 1 or pattern.n_rows % dim != 0:
        raise DimMismatch(f"n_rows={pattern.n_rows} not divisible by dim={dim}")
    require_symmetric(pattern)
    rows, cols = pattern.to_coo()
    rb, cb = rows // dim, cols // dim
    off = rb != cb
    return SymGraph.from_edges(pattern.n_rows // dim, rb[off], cb[off])


def induced_subgraph(g: SymGraph, nodes) -> tuple[SymGraph, np.ndarray]:
    """Subgraph over `nodes` plus the local-to-global index array."""
    nodes = np.unique(_index_array(nodes))
    if nodes.size and (nodes.min() < 0 or nodes.max() >= g.n_nodes):
        raise IndexOutOfBounds("subgraph node outside [0, n_nodes)")
    pos = np.full(g.n_nodes, -1, dtype=np.int64)
    pos[nodes] = np.arange(nodes.size, dtype=np.int64)
    counts = g.adj_starts[nodes + 1] - g.adj_starts[nodes]
    flat_rows = np.repeat(np.arange(nodes.size, dtype=np.int64), counts)
    flat_cols = _gather_slices(g.adj, g.adj_starts[nodes], counts)
    keep = pos[flat_cols] >= 0
    flat_rows, flat_cols = flat_rows[keep], pos[flat_cols[keep]]
    # pos is monotone on sorted nodes, so per-row sortedness is preserved
    sub_counts = np.bincount(flat_rows, minlength=nodes.size) if flat_rows.size else np.zeros(nodes.size, np.int64)
    return SymGraph(nodes.size, _counts_to_starts(sub_counts), flat_cols), nodes


@dataclass(frozen=True, eq=False)
class NodeMap:
    """Index map between consecutive graphs.

    entries[i] is the index of new node i in the previous graph, or ABSENT
    (-1) for a node that did not exist before. Previous-graph indices not in
    the image are treated as removed nodes.
    """

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _index_array(self.entries))
        self.entries.setflags(write=False)

    @property
    def n_new(self) -> int:
        return int(self.entries.size)

    @classmethod
    def identity(cls, n: int) -> "NodeMap":
        return cls(np.arange(n, dtype=np.int64))

    def validate(self, n_old: int) -> None:
        e = self.entries
        if e.size and e.min() < ABSENT:
            raise InvalidMap("map entries below -1")
        present = e[e >= 0]
        if present.size:
            if present.max() >= n_old:
                raise InvalidMap("map entry outside previous graph")
            if np.unique(present).size != present.size:
                raise InvalidMap("duplicate previous-graph index in map")

    def old_to_new(self, n_old: int) -> np.ndarray:
        """Inverse view: previous index -> new index, -1 for removed nodes."""
        self.validate(n_old)
        o2n = np.full(n_old, -1, dtype=np.int64)
        new_ids = np.flatnonzero(self.entries >= 0)
        o2n[self.entries[new_ids]] = new_ids
        return o2n


def edge_set_diff(
    g_old: SymGraph, g_new: SymGraph, node_map: NodeMap
) -> tuple[np.ndarray, np.ndarray]:
    """Exact edge delta between consecutive graphs.

    Returns (added, removed) as (k, 2) arrays of unordered pairs. Added
    edges use new-graph indices; removed edges use old-graph indices. Edges
    incident to removed nodes are excluded from the removed set; every edge
    incident to an added node shows up in the added set.
    """
    if node_map.n_new != g_new.n_nodes:
        raise InvalidMap(f"map has {node_map.n_new} entries, graph has {g_new.n_nodes} nodes")
    o2n = node_map.old_to_new(g_old.n_nodes)

    ou, ov = g_old.edges()
    tu, tv = (o2n[ou], o2n[ov]) if ou.size else (ou, ov)
    survive = (tu >= 0) & (tv >= 0)
    tlo = np.minimum(tu[survive], tv[survive])
    thi = np.maximum(tu[survive], tv[survive])
    n = np.int64(max(g_new.n_nodes, 1))
    old_keys = tlo * n + thi

    nu, nv = g_new.edges()
    new_keys = nu * n + nv

    added_mask = ~np.isin(new_keys, old_keys)
    added = np.column_stack([nu[added_mask], nv[added_mask]])

    removed_mask = ~np.isin(old_keys, new_keys)
    su, sv = ou[survive], ov[survive]
    removed = np.column_stack([su[removed_mask], sv[removed_mask]])
    if removed.size:
        order = np.lexsort((removed[:, 1], removed[:, 0]))
        removed = removed[order]
    return added.astype(np.int64), removed.astype(np.int64)
