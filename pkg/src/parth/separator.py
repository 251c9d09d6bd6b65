"""Small balanced vertex separators.

The default engine is dependency-free: BFS level sets from a
pseudo-peripheral node, boundary selection by balance, then a greedy
shrink pass. The engine interface is intentionally tiny so a stronger
partitioner can be slotted in without touching the decomposition or
synchronization code.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import SymGraph, bfs_distances, connected_components, gather_neighbors

_EMPTY = np.empty(0, dtype=np.int64)

_SIDE_SEP = 0
_SIDE_LEFT = 1
_SIDE_RIGHT = 2


@dataclass(frozen=True, eq=False)
class SeparatorResult:
    """Disjoint (sep, left, right) partition with no left-right edge."""

    sep: np.ndarray
    left: np.ndarray
    right: np.ndarray


class SeparatorEngine:
    """Strategy interface: deterministic for a fixed (graph, seed)."""

    name = "abstract"

    def split(self, g: SymGraph, seed: int = 0) -> SeparatorResult:
        raise NotImplementedError


def _pseudo_peripheral(g: SymGraph, comp: np.ndarray) -> int:
    """Two rounds of farthest-node BFS; ties resolved to the lowest index."""
    start = int(comp.min())
    for _ in range(2):
        dist = bfs_distances(g, start)
        far = dist[comp].max()
        start = int(comp[dist[comp] == far].min())
    return start


class LevelSetEngine(SeparatorEngine):
    """BFS level-set bisection with greedy separator shrinking."""

    name = "level_set"

    def __init__(self, balance: float = 0.7):
        self.balance = balance

    def split(self, g: SymGraph, seed: int = 0) -> SeparatorResult:
        n = g.n_nodes
        ids = np.arange(n, dtype=np.int64)
        if n <= 1:
            return SeparatorResult(_EMPTY, ids, _EMPTY)

        comps = connected_components(g)
        big = max(comps, key=lambda c: (c.size, -int(c.min())))
        sep = _EMPTY
        if big.size >= 3 and gather_neighbors(g, big).size:
            sep = self._level_separator(g, big)

        side = np.zeros(n, dtype=np.int8)
        in_sep = np.zeros(n, dtype=bool)
        in_sep[sep] = True
        sizes = [0, 0, 0]
        for comp in sorted(connected_components(g, mask=~in_sep),
                           key=lambda c: (-c.size, int(c.min()))):
            tgt = _SIDE_LEFT if sizes[_SIDE_LEFT] <= sizes[_SIDE_RIGHT] else _SIDE_RIGHT
            side[comp] = tgt
            sizes[tgt] += comp.size

        self._shrink(g, side, sizes, sep)
        return SeparatorResult(
            np.flatnonzero(side == _SIDE_SEP) if sep.size else _EMPTY,
            np.flatnonzero(side == _SIDE_LEFT),
            np.flatnonzero(side == _SIDE_RIGHT),
        )

    def _level_separator(self, g: SymGraph, comp: np.ndarray) -> np.ndarray:
        root = _pseudo_peripheral(g, comp)
        dist = bfs_distances(g, root)
        depth = int(dist[comp].max())
        level_nodes = [comp[dist[comp] == t] for t in range(depth + 1)]
        level_sizes = np.array([ln.size for ln in level_nodes], dtype=np.int64)
        before_cum = np.concatenate([[0], np.cumsum(level_sizes)[:-1]])
        total = int(comp.size)

        best_t, best_score, best_sep = 0, None, _EMPTY
        for t in range(depth + 1):
            ln = level_nodes[t]
            if t < depth:
                nb = gather_neighbors(g, ln)
                counts = g.adj_starts[ln + 1] - g.adj_starts[ln]
                touches = np.repeat(np.arange(ln.size), counts)[dist[nb] == t + 1]
                sep_t = ln[np.unique(touches)]
            else:
                sep_t = _EMPTY
            before = int(before_cum[t]) + ln.size - sep_t.size
            after = total - int(before_cum[t]) - ln.size
            score = abs(before - after)
            if best_score is None or score < best_score:
                best_t, best_score, best_sep = t, score, sep_t
        return np.sort(best_sep)

    def _shrink(self, g: SymGraph, side: np.ndarray, sizes: list[int], sep: np.ndarray) -> None:
        """Move separator nodes touching only one side into that side."""
        if sizes[_SIDE_LEFT] == 0 or sizes[_SIDE_RIGHT] == 0:
            # nothing is separated; collapsing the separator would only hide that
            return
        pending = list(map(int, sep))
        changed = True
        while changed:
            changed = False
            still = []
            for s in pending:
                nb_side = side[g.neighbors(s)]
                has_l = bool(np.any(nb_side == _SIDE_LEFT))
                has_r = bool(np.any(nb_side == _SIDE_RIGHT))
                if has_l and has_r:
                    still.append(s)
                    continue
                if has_l:
                    tgt = _SIDE_LEFT
                elif has_r:
                    tgt = _SIDE_RIGHT
                else:
                    tgt = _SIDE_LEFT if sizes[_SIDE_LEFT] <= sizes[_SIDE_RIGHT] else _SIDE_RIGHT
                side[s] = tgt
                sizes[tgt] += 1
                changed = True
            pending = still


ENGINES = {LevelSetEngine.name: LevelSetEngine}


def make_engine(name: str, **kwargs) -> SeparatorEngine:
    try:
        return ENGINES[name](**kwargs)
    except KeyError:
        raise ValueError(f"unknown separator engine {name!r} (available: {sorted(ENGINES)})") from None


def compute_min_separator(g: SymGraph, engine: SeparatorEngine, seed: int = 0) -> SeparatorResult:
    """Split g into (sep, left, right); total function, never raises."""
    return engine.split(g, seed)


def verify_separator(g: SymGraph, result: SeparatorResult) -> bool:
    """Exhaustive check: partition, disjointness, and no left-right edge."""
    n = g.n_nodes
    side = np.zeros(n, dtype=np.int8)
    for arr, code in ((result.left, _SIDE_LEFT), (result.right, _SIDE_RIGHT)):
        side[arr] = code
    pieces = np.concatenate([result.sep, result.left, result.right])
    if pieces.size != n or np.unique(pieces).size != n:
        return False
    u, v = g.edges()
    crossing = ((side[u] == _SIDE_LEFT) & (side[v] == _SIDE_RIGHT)) | (
        (side[u] == _SIDE_RIGHT) & (side[v] == _SIDE_LEFT)
    )
    return not bool(np.any(crossing))
