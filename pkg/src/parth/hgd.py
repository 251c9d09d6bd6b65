"""Hierarchical graph decomposition.

A complete binary tree, stored as a flat array with children at 2i+1 and
2i+2, holds one sub-graph per tree node: internal nodes store vertex
separators, leaves store the remaining regions. Subtrees can be rebuilt in
place when sparsity changes invalidate a separator, leaving the rest of the
tree untouched.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import RegionMismatch, StaleTree
from .graph import SymGraph, induced_subgraph
from .separator import SeparatorEngine, compute_min_separator

# Sub-graphs smaller than this stop recursing and are stored whole; splitting
# fewer than 3 nodes cannot produce a separator worth keeping.
MIN_SPLIT = 3

_EMPTY = np.empty(0, dtype=np.int64)


def tree_size(max_level: int) -> int:
    return (1 << (max_level + 1)) - 1


def level_of(i: int) -> int:
    return (i + 1).bit_length() - 1


def parent_of(i: int) -> int:
    return (i - 1) // 2


def is_in_subtree(i: int, root: int) -> bool:
    """True when tree index i lies in the subtree rooted at root (inclusive)."""
    while i > root:
        i = parent_of(i)
    return i == root


def lca_of(a: int, b: int) -> int:
    while a != b:
        if a > b:
            a = parent_of(a)
        else:
            b = parent_of(b)
    return a


class HgdNode:
    """One tree slot: its global node set, splice offset, and local ordering."""

    __slots__ = ("nodes", "offset", "local_perm")

    def __init__(self, nodes: np.ndarray | None = None):
        self.nodes = _EMPTY if nodes is None else np.asarray(nodes, dtype=np.int64)
        self.offset = 0
        self.local_perm: np.ndarray | None = None

    def copy(self) -> "HgdNode":
        out = HgdNode(self.nodes.copy())
        out.offset = self.offset
        out.local_perm = None if self.local_perm is None else self.local_perm.copy()
        return out


class HgdTree:
    """Array-backed complete binary tree of sub-graphs."""

    def __init__(self, max_level: int):
        self.max_level = int(max_level)
        self.nodes = [HgdNode() for _ in range(tree_size(max_level))]

    @property
    def size(self) -> int:
        return len(self.nodes)

    def subtree_indices(self, root: int) -> list[int]:
        out = []
        stack = [root]
        while stack:
            i = stack.pop()
            out.append(i)
            if 2 * i + 2 < self.size:
                stack.extend((2 * i + 2, 2 * i + 1))
        return sorted(out)

    def subtree_union(self, root: int) -> np.ndarray:
        parts = [self.nodes[i].nodes for i in self.subtree_indices(root)]
        return np.sort(np.concatenate(parts)) if parts else _EMPTY

    def total_nodes(self) -> int:
        return int(sum(tn.nodes.size for tn in self.nodes))

    def node_to_tree(self, n_nodes: int) -> np.ndarray:
        """Graph node -> tree index lookup; raises StaleTree on bad coverage."""
        lookup = np.full(n_nodes, -1, dtype=np.int64)
        for idx, tn in enumerate(self.nodes):
            if tn.nodes.size == 0:
                continue
            if tn.nodes.min() < 0 or tn.nodes.max() >= n_nodes:
                raise StaleTree(f"tree node {idx} references a graph node outside [0, {n_nodes})")
            if np.any(lookup[tn.nodes] >= 0):
                raise StaleTree("tree node sets overlap")
            lookup[tn.nodes] = idx
        if np.any(lookup < 0):
            raise StaleTree("tree node sets do not cover the graph")
        return lookup

    def validate_partition(self, n_nodes: int) -> None:
        self.node_to_tree(n_nodes)

    def separator_violations(self, g: SymGraph) -> list[int]:
        """Edge-scan audit: ancestors whose left/right subtrees are connected.

        Returns the sorted lowest common ancestors of all offending edges;
        empty when every separator is intact.
        """
        lookup = self.node_to_tree(g.n_nodes)
        bad = set()
        eu, ev = g.edges()
        for a, b in zip(lookup[eu], lookup[ev]):
            a, b = int(a), int(b)
            if a == b or is_in_subtree(a, b) or is_in_subtree(b, a):
                continue
            bad.add(lca_of(a, b))
        return sorted(bad)

    def copy(self) -> "HgdTree":
        out = HgdTree(self.max_level)
        out.nodes = [tn.copy() for tn in self.nodes]
        return out

    @classmethod
    def from_node_sets(cls, max_level: int, sets, g: SymGraph | None = None) -> "HgdTree":
        """Build a tree directly from per-index node sets.

        Meant for tests and replay tooling. Partition is always validated;
        when a graph is supplied the separator property is checked too.
        """
        tree = cls(max_level)
        if len(sets) != tree.size:
            raise StaleTree(f"expected {tree.size} node sets, got {len(sets)}")
        for idx, s in enumerate(sets):
            tree.nodes[idx].nodes = np.unique(np.asarray(s, dtype=np.int64))
        tree.validate_partition(tree.total_nodes())
        if g is not None:
            bad = tree.separator_violations(g)
            if bad:
                raise StaleTree(f"separator property violated at tree nodes {bad}")
        return tree


def _build_into(
    tree: HgdTree,
    sub: SymGraph,
    to_global: np.ndarray,
    level: int,
    idx: int,
    engine: SeparatorEngine,
    seed: int,
) -> None:
    node = tree.nodes[idx]
    node.local_perm = None
    node.offset = 0
    if level == tree.max_level or sub.n_nodes < MIN_SPLIT:
        node.nodes = to_global
        return
    res = compute_min_separator(sub, engine, seed)
    node.nodes = to_global[res.sep]
    left_sub, lsel = induced_subgraph(sub, res.left)
    _build_into(tree, left_sub, to_global[lsel], level + 1, 2 * idx + 1, engine, seed)
    right_sub, rsel = induced_subgraph(sub, res.right)
    _build_into(tree, right_sub, to_global[rsel], level + 1, 2 * idx + 2, engine, seed)


def hgd_build(g: SymGraph, max_level: int, engine: SeparatorEngine, seed: int = 0) -> HgdTree:
    """Recursive separator decomposition of g down to max_level."""
    tree = HgdTree(max_level)
    _build_into(tree, g, np.arange(g.n_nodes, dtype=np.int64), 0, 0, engine, seed)
    return tree


def hgd_redecompose(
    tree: HgdTree,
    root_index: int,
    g: SymGraph,
    region,
    engine: SeparatorEngine,
    seed: int = 0,
) -> None:
    """Rebuild the subtree at root_index over `region`, in place.

    The region must equal the union of node sets currently stored in that
    subtree; every tree node outside the subtree is left untouched.
    """
    region = np.unique(np.asarray(region, dtype=np.int64))
    current = tree.subtree_union(root_index)
    if not np.array_equal(region, current):
        raise RegionMismatch(
            f"region ({region.size} nodes) differs from subtree {root_index} contents ({current.size} nodes)"
        )
    depth = tree.max_level - level_of(root_index)
    sub, to_global = induced_subgraph(g, region)
    temp = hgd_build(sub, depth, engine, seed)
    stack = [(0, root_index)]
    while stack:
        loc, glob = stack.pop()
        node = tree.nodes[glob]
        node.nodes = to_global[temp.nodes[loc].nodes]
        node.local_perm = None
        node.offset = 0
        if 2 * loc + 2 < temp.size:
            stack.extend(((2 * loc + 1, 2 * glob + 1), (2 * loc + 2, 2 * glob + 2)))


def default_max_level(n_nodes: int, target_leaf: int = 256) -> int:
    """Depth that aims for roughly target_leaf nodes per leaf, clamped to [0, 16]."""
    ratio = n_nodes / target_leaf
    level = 0 if ratio < 1.0 else int(math.floor(math.log2(ratio)))
    return max(0, min(level, 16))
