"""Change propagation between consecutive graphs and the decomposition tree.

One call runs the full pipeline: settle node additions/removals, diff the
edge sets, map each changed edge to a pair of tree nodes, classify the pairs
as fine dirt (local ordering stale) or coarse dirt (separator broken), drop
redundant entries, and rebuild the remaining coarse regions. The result is a
reuse mask over tree nodes: True means the stored local ordering is still
valid.

Classification rules per changed edge with tree endpoints (a, b):
  * a == b: the edge lies inside one sub-graph, whose local ordering must be
    recomputed; nothing structural changed.
  * a and b on one root-to-leaf path: no separator can be broken by an edge
    between a separator and its own subtree, so the change is dismissed.
  * disjoint subtrees, edge added: the lowest common ancestor's separator no
    longer separates; its whole subtree is rebuilt.
  * disjoint subtrees, edge removed: separators stay valid; both endpoint
    sub-graphs are merely marked for reordering.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidMap
from .graph import ABSENT, NodeMap, SymGraph, edge_set_diff
from .hgd import HgdTree, hgd_redecompose, is_in_subtree, lca_of, level_of
from .separator import SeparatorEngine

ADDED = "added"
REMOVED = "removed"


@dataclass(frozen=True)
class TreeEdgeChange:
    """A changed graph edge (u, v) expressed as the tree-node pair (a, b)."""

    a: int
    b: int
    kind: str
    u: int = -1
    v: int = -1


@dataclass
class DirtyState:
    """Outcome of one synchronization.

    reuse_mask[i] is True when tree node i kept its local ordering. fine and
    coarse are the filtered dirty sets; dirty_node_total is the number of
    graph nodes covered by them (the upper bound on reordering work).
    """

    reuse_mask: np.ndarray
    fine: frozenset
    coarse: frozenset
    dirty_node_total: int = 0


def _related(a: int, b: int) -> bool:
    return a == b or is_in_subtree(a, b) or is_in_subtree(b, a)


def _insert_sorted(arr: np.ndarray, value: int) -> np.ndarray:
    pos = int(np.searchsorted(arr, value))
    return np.insert(arr, pos, value)


def _remove_sorted(arr: np.ndarray, value: int) -> np.ndarray:
    pos = int(np.searchsorted(arr, value))
    return np.delete(arr, pos)


def node_change_synchronizer(
    tree: HgdTree, node_map: NodeMap, n_new: int, g_new: SymGraph
) -> set[int]:
    """Relabel tree node sets to the new indexing and settle added/removed nodes.

    Surviving nodes are renumbered in place; removed nodes are deleted from
    their sets; each added node joins the deepest tree node holding one of
    its already-placed neighbors (surviving neighbors preferred), falling
    back to the root when isolated. Returns the tree indices whose
    membership changed.
    """
    n_old = tree.total_nodes()
    node_map.validate(n_old)
    if node_map.n_new != n_new:
        raise InvalidMap(f"map has {node_map.n_new} entries, expected {n_new}")
    o2n = node_map.old_to_new(n_old)

    touched: set[int] = set()
    for idx, tn in enumerate(tree.nodes):
        if tn.nodes.size == 0:
            continue
        mapped = o2n[tn.nodes]
        kept = mapped[mapped >= 0]
        if kept.size != tn.nodes.size:
            touched.add(idx)
            tn.local_perm = None
        tn.nodes = np.sort(kept)

    added = np.flatnonzero(node_map.entries == ABSENT)
    if added.size:
        lookup = np.full(n_new, -1, dtype=np.int64)
        for idx, tn in enumerate(tree.nodes):
            if tn.nodes.size:
                lookup[tn.nodes] = idx
        survivor = node_map.entries >= 0
        for u in map(int, added):
            nbrs = g_new.neighbors(u)
            placed = lookup[nbrs] >= 0
            target = 0
            for pool in (nbrs[placed & survivor[nbrs]], nbrs[placed]):
                if pool.size:
                    cands = np.unique(lookup[pool])
                    depths = np.array([level_of(int(c)) for c in cands])
                    target = int(cands[depths == depths.max()].min())
                    break
            tn = tree.nodes[target]
            tn.nodes = _insert_sorted(tn.nodes, u)
            tn.local_perm = None
            lookup[u] = target
            touched.add(target)
    return touched


def map_edges_to_tree(
    tree: HgdTree, added: np.ndarray, removed: np.ndarray
) -> tuple[list[TreeEdgeChange], set[int]]:
    """Express graph-edge deltas as tree-node pairs.

    Both edge arrays must use the current (new) graph indexing. Edges whose
    endpoints share a tree node are returned separately as fine-grain marks
    on that node.
    """
    n = tree.total_nodes()
    lookup = tree.node_to_tree(n)
    changes: list[TreeEdgeChange] = []
    fine: set[int] = set()
    for pairs, kind in ((added, ADDED), (removed, REMOVED)):
        for u, v in np.asarray(pairs, dtype=np.int64).reshape(-1, 2):
            a, b = int(lookup[u]), int(lookup[v])
            if a == b:
                fine.add(a)
            else:
                changes.append(TreeEdgeChange(a, b, kind, int(u), int(v)))
    return changes, fine


def dirty_subgraph_detection(
    tree: HgdTree, changes: list[TreeEdgeChange]
) -> tuple[set[int], set[int]]:
    """Classify tree-edge changes into fine and coarse dirty sets."""
    fine: set[int] = set()
    coarse: set[int] = set()
    for ch in changes:
        if ch.a == ch.b:
            fine.add(ch.a)
        elif _related(ch.a, ch.b):
            continue
        elif ch.kind == ADDED:
            coarse.add(lca_of(ch.a, ch.b))
        else:
            fine.update((ch.a, ch.b))
    return fine, coarse


def filter_redundant_subgraphs(fine: set[int], coarse: set[int]) -> tuple[set[int], set[int]]:
    """Drop nested coarse roots and fine marks covered by a coarse subtree."""
    coarse_kept = {
        c for c in coarse if not any(c2 != c and is_in_subtree(c, c2) for c2 in coarse)
    }
    fine_kept = {f for f in fine if not any(is_in_subtree(f, c) for c in coarse_kept)}
    return fine_kept, coarse_kept


def aggressive_reuse(
    tree: HgdTree, g_new: SymGraph, changes: list[TreeEdgeChange], theta: float = 0.5
) -> tuple[list[TreeEdgeChange], set[int]]:
    """Defuse added edges whose coarse region would cover more than theta * n.

    For each such edge the endpoint held by the smaller tree node (ties to
    the lower graph index) is moved into the lowest common ancestor's
    separator set, turning the change into an ancestor-related one that
    needs no re-decomposition. The move is reverted, falling back to coarse
    dirt, if any edge incident to the moved node would still cross disjoint
    subtrees. Returns the remaining changes (tree pairs refreshed) plus the
    extra fine-dirty tree nodes produced by the moves.
    """
    n = tree.total_nodes()
    lookup = tree.node_to_tree(n)
    extra: set[int] = set()
    out: list[TreeEdgeChange] = []
    for ch in changes:
        if ch.u < 0 or ch.v < 0:  # no graph endpoints recorded, nothing to move
            out.append(ch)
            continue
        a, b = int(lookup[ch.u]), int(lookup[ch.v])
        if a == b:
            extra.add(a)
            continue
        ch = replace(ch, a=a, b=b)
        if ch.kind != ADDED or _related(a, b):
            out.append(ch)
            continue
        anc = lca_of(a, b)
        region = sum(tree.nodes[i].nodes.size for i in tree.subtree_indices(anc))
        if region <= theta * n:
            out.append(ch)
            continue
        size_a, size_b = tree.nodes[a].nodes.size, tree.nodes[b].nodes.size
        if size_a < size_b or (size_a == size_b and ch.u < ch.v):
            mover, src = ch.u, a
        else:
            mover, src = ch.v, b
        tree.nodes[src].nodes = _remove_sorted(tree.nodes[src].nodes, mover)
        tree.nodes[anc].nodes = _insert_sorted(tree.nodes[anc].nodes, mover)
        lookup[mover] = anc
        if all(_related(anc, int(lookup[w])) for w in g_new.neighbors(mover)):
            tree.nodes[src].local_perm = None
            tree.nodes[anc].local_perm = None
            extra.update((src, anc))
        else:
            tree.nodes[anc].nodes = _remove_sorted(tree.nodes[anc].nodes, mover)
            tree.nodes[src].nodes = _insert_sorted(tree.nodes[src].nodes, mover)
            lookup[mover] = src
            out.append(ch)
    return out, extra


def mark_and_decompose(
    tree: HgdTree,
    g_new: SymGraph,
    fine: set[int],
    coarse: set[int],
    engine: SeparatorEngine,
    seed: int = 0,
) -> DirtyState:
    """Rebuild coarse regions and emit the reuse mask."""
    reuse_mask = np.ones(tree.size, dtype=bool)
    total = 0
    for root in sorted(coarse):
        region = tree.subtree_union(root)
        total += int(region.size)
        hgd_redecompose(tree, root, g_new, region, engine, seed)
        reuse_mask[tree.subtree_indices(root)] = False
    for f in sorted(fine):
        reuse_mask[f] = False
        total += int(tree.nodes[f].nodes.size)
    return DirtyState(reuse_mask, frozenset(fine), frozenset(coarse), total)


def synchronize(
    tree: HgdTree,
    g_old: SymGraph,
    g_new: SymGraph,
    node_map: NodeMap,
    engine: SeparatorEngine,
    seed: int = 0,
    aggressive: bool = False,
    theta: float = 0.5,
) -> DirtyState:
    """Bring a tree built over g_old up to date with g_new.

    After the call the tree's node sets partition the new graph and every
    separator holds on g_new; the returned mask tells the assembler which
    local orderings survived.
    """
    touched = node_change_synchronizer(tree, node_map, g_new.n_nodes, g_new)
    added, removed = edge_set_diff(g_old, g_new, node_map)
    if removed.size:
        removed = node_map.old_to_new(g_old.n_nodes)[removed]
    changes, fine_marks = map_edges_to_tree(tree, added, removed)
    extra: set[int] = set()
    if aggressive:
        changes, extra = aggressive_reuse(tree, g_new, changes, theta)
    fine, coarse = dirty_subgraph_detection(tree, changes)
    fine |= fine_marks | touched | extra
    fine, coarse = filter_redundant_subgraphs(fine, coarse)
    return mark_and_decompose(tree, g_new, fine, coarse, engine, seed)
