"""Deterministic generators of dynamic-sparsity sequences.

Two change regimes are covered at desk scale: contact-style edge injection
confined to a hop-ball, and patch remeshing that removes the ball's nodes
and rewires a densified replacement, emitting the node map for the
dimension change.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import BallTooSmall, IndexOutOfBounds
from .graph import NodeMap, SparsityPattern, bfs_distances, build_dual


def _pattern_with_values(n, rows, cols, vals):
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    vals = np.asarray(vals, dtype=np.float64)
    keys = rows * np.int64(n) + cols
    uniq, inverse = np.unique(keys, return_inverse=True)
    out = np.zeros(uniq.size, dtype=np.float64)
    np.add.at(out, inverse, vals)
    counts = np.bincount(uniq // n, minlength=n) if uniq.size else np.zeros(n, np.int64)
    starts = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=starts[1:])
    return SparsityPattern(n, starts, uniq % n), out


def grid_laplacian(nx: int, ny: int) -> tuple[SparsityPattern, np.ndarray]:
    """5-point Laplacian on an nx-by-ny grid, shifted by 1e-3 to make it SPD."""
    if nx < 2 or ny < 2:
        raise ValueError("grid_laplacian requires nx, ny >= 2")
    n = nx * ny
    idx = np.arange(n, dtype=np.int64).reshape(ny, nx)
    right = np.column_stack([idx[:, :-1].ravel(), idx[:, 1:].ravel()])
    down = np.column_stack([idx[:-1, :].ravel(), idx[1:, :].ravel()])
    eu = np.concatenate([right[:, 0], down[:, 0]])
    ev = np.concatenate([right[:, 1], down[:, 1]])
    deg = np.bincount(np.concatenate([eu, ev]), minlength=n).astype(np.float64)
    rows = np.concatenate([eu, ev, np.arange(n, dtype=np.int64)])
    cols = np.concatenate([ev, eu, np.arange(n, dtype=np.int64)])
    vals = np.concatenate([-np.ones(eu.size), -np.ones(eu.size), deg + 1e-3])
    return _pattern_with_values(n, rows, cols, vals)


def hop_ball(pattern: SparsityPattern, center: int, radius: int) -> np.ndarray:
    """Nodes within `radius` hops of center in the pattern's graph."""
    if not 0 <= center < pattern.n_rows:
        raise IndexOutOfBounds(f"center {center} outside [0, {pattern.n_rows})")
    dist = bfs_distances(build_dual(pattern), center)
    return np.flatnonzero((dist >= 0) & (dist <= radius))


def radius_for_fraction(pattern: SparsityPattern, center: int, fraction: float) -> int:
    """Largest hop radius whose ball stays within `fraction` of all nodes."""
    target = max(1, int(fraction * pattern.n_rows))
    dist = bfs_distances(build_dual(pattern), center)
    radius = 0
    while np.count_nonzero((dist >= 0) & (dist <= radius + 1)) <= target:
        radius += 1
        if radius > pattern.n_rows:
            break
    return radius


def inject_contacts(
    pattern: SparsityPattern, center: int, radius: int, k: int, seed: int = 0
) -> SparsityPattern:
    """Add k random symmetric nonzeros between node pairs inside a hop-ball."""
    if k == 0:
        return pattern
    ball = hop_ball(pattern, center, radius)
    if ball.size < 2:
        raise BallTooSmall(f"ball around {center} has {ball.size} node(s); need at least 2")
    ai, bi = np.triu_indices(ball.size, k=1)
    cu, cv = ball[ai], ball[bi]
    existing = pattern.entry_keys()
    keys = cu * np.int64(pattern.n_rows) + cv
    fresh = ~np.isin(keys, existing)
    cu, cv = cu[fresh], cv[fresh]
    if cu.size == 0:
        return pattern
    rng = np.random.default_rng(seed)
    pick = rng.choice(cu.size, size=min(k, cu.size), replace=False)
    rows, cols = pattern.to_coo()
    new_rows = np.concatenate([rows, cu[pick], cv[pick]])
    new_cols = np.concatenate([cols, cv[pick], cu[pick]])
    return SparsityPattern.from_coo(pattern.n_rows, new_rows, new_cols)


def patch_remesh(
    pattern: SparsityPattern, center: int, radius: int, densify: float = 1.0, seed: int = 0
) -> tuple[SparsityPattern, NodeMap]:
    """Replace a hop-ball with freshly wired nodes; returns the node map.

    Ball nodes are removed; ceil(densify * ball) new nodes are appended after
    the (order-preserving) survivors, chained together for connectivity and
    attached to random boundary nodes. The map satisfies the usual
    invariants by construction.
    """
    if densify <= 0:
        raise ValueError("densify must be positive")
    n = pattern.n_rows
    ball = hop_ball(pattern, center, radius)
    if ball.size == 0:
        raise BallTooSmall("empty ball")
    g = build_dual(pattern)
    in_ball = np.zeros(n, dtype=bool)
    in_ball[ball] = True
    survivors = np.flatnonzero(~in_ball)
    boundary_old = np.unique(
        np.concatenate([g.neighbors(int(b)) for b in ball] or [np.empty(0, np.int64)])
    )
    boundary_old = boundary_old[~in_ball[boundary_old]]
    if boundary_old.size == 0:
        raise BallTooSmall("ball has no boundary to reattach new nodes to")

    new_of_old = np.full(n, -1, dtype=np.int64)
    new_of_old[survivors] = np.arange(survivors.size, dtype=np.int64)
    n_added = int(math.ceil(densify * ball.size))
    n_new = survivors.size + n_added
    fresh = survivors.size + np.arange(n_added, dtype=np.int64)
    boundary = new_of_old[boundary_old]

    rows, cols = pattern.to_coo()
    keep = ~in_ball[rows] & ~in_ball[cols]
    eu = [new_of_old[rows[keep]]]
    ev = [new_of_old[cols[keep]]]

    rng = np.random.default_rng(seed)
    if n_added > 1:
        eu.append(fresh[:-1])
        ev.append(fresh[1:])
    for u in fresh:
        att = rng.choice(boundary, size=min(2, boundary.size), replace=False)
        eu.append(np.full(att.size, u, dtype=np.int64))
        ev.append(att)
    eu.append(fresh)  # fresh nodes carry a diagonal entry
    ev.append(fresh)

    u = np.concatenate(eu)
    v = np.concatenate(ev)
    all_rows = np.concatenate([u, v])
    all_cols = np.concatenate([v, u])
    new_pattern = SparsityPattern.from_coo(n_new, all_rows, all_cols)
    entries = np.concatenate([survivors, np.full(n_added, -1, dtype=np.int64)])
    return new_pattern, NodeMap(entries)
