"""Ground-truth symbolic and numeric checks for ordering quality.

Everything here is deliberately simple and exact at desk scale: the
elimination tree by path compression, per-column counts by row-subtree
traversal, and a scalar left-looking sparse Cholesky for end-to-end
verification. The numeric path exists to verify orderings, not to compete
with production factorization kernels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidPermutation, NotPositiveDefinite
from .graph import SparsityPattern, _counts_to_starts
from .ordering import invert_permutation, is_permutation

ROOT = -1


@dataclass(frozen=True)
class FactorStats:
    """nnz of the Cholesky factor (diagonal included) and a flop proxy."""

    nnz_l: int
    flop_estimate: int


def _permuted_strict_lower(pattern: SparsityPattern, perm: np.ndarray):
    """CSR arrays of the strict lower triangle of the permuted pattern."""
    inv = invert_permutation(perm)
    rows, cols = pattern.to_coo()
    pr, pc = inv[rows], inv[cols]
    keep = pr > pc
    pr, pc = pr[keep], pc[keep]
    order = np.lexsort((pc, pr))
    pr, pc = pr[order], pc[order]
    counts = np.bincount(pr, minlength=pattern.n_rows) if pr.size else np.zeros(pattern.n_rows, np.int64)
    return _counts_to_starts(counts), pc


def _etree(n: int, starts: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Elimination tree of a symmetric pattern given its strict lower rows."""
    parent = np.full(n, ROOT, dtype=np.int64)
    ancestor = np.full(n, ROOT, dtype=np.int64)
    for k in range(n):
        for j in cols[starts[k] : starts[k + 1]]:
            j = int(j)
            while j != ROOT and j < k:
                nxt = int(ancestor[j])
                ancestor[j] = k
                if nxt == ROOT:
                    parent[j] = k
                j = nxt
    return parent


def _row_subtree_counts(
    n: int,
    starts: np.ndarray,
    cols: np.ndarray,
    parent: np.ndarray,
    collect_rows: bool = False,
):
    """Exact per-column factor counts; optionally the factor's row patterns."""
    counts = np.ones(n, dtype=np.int64)  # diagonal entries
    mark = np.full(n, -1, dtype=np.int64)
    rows = [] if collect_rows else None
    for i in range(n):
        mark[i] = i
        row = [] if collect_rows else None
        for j in cols[starts[i] : starts[i + 1]]:
            k = int(j)
            while mark[k] != i:
                mark[k] = i
                counts[k] += 1
                if collect_rows:
                    row.append(k)
                k = int(parent[k])
        if collect_rows:
            row.sort()
            rows.append(row)
    return counts, rows


def elimination_tree(pattern: SparsityPattern, perm: np.ndarray) -> np.ndarray:
    """Per-column parent array of the permuted pattern's factor; ROOT marks roots."""
    n = pattern.n_rows
    if not is_permutation(np.asarray(perm), n):
        raise InvalidPermutation("permutation does not match the pattern size")
    starts, cols = _permuted_strict_lower(pattern, np.asarray(perm, dtype=np.int64))
    return _etree(n, starts, cols)


def symbolic_analyze(pattern: SparsityPattern, perm: np.ndarray) -> FactorStats:
    """Exact factor statistics of the permuted pattern.

    Computes the elimination tree and per-column counts of P A P^T; returns
    nnz(L) including the diagonal and sum(count^2) as a flop proxy.
    """
    n = pattern.n_rows
    if not is_permutation(np.asarray(perm), n):
        raise InvalidPermutation("permutation does not match the pattern size")
    starts, cols = _permuted_strict_lower(pattern, np.asarray(perm, dtype=np.int64))
    parent = _etree(n, starts, cols)
    counts, _ = _row_subtree_counts(n, starts, cols, parent)
    return FactorStats(int(counts.sum()), int(np.sum(counts * counts)))


def _factor_row_patterns(pattern: SparsityPattern, perm: np.ndarray):
    starts, cols = _permuted_strict_lower(pattern, perm)
    parent = _etree(pattern.n_rows, starts, cols)
    _, rows = _row_subtree_counts(pattern.n_rows, starts, cols, parent, collect_rows=True)
    return rows


def numeric_cholesky_solve(
    pattern: SparsityPattern,
    values: np.ndarray,
    perm: np.ndarray,
    b: np.ndarray,
) -> tuple[np.ndarray, float]:
    """Factor P A P^T = L L^T, solve A x = b, and report the relative residual.

    `values` must align entry-for-entry with the pattern (full symmetric
    storage). Raises NotPositiveDefinite on a nonpositive pivot.
    """
    n = pattern.n_rows
    perm = np.asarray(perm, dtype=np.int64)
    if not is_permutation(perm, n):
        raise InvalidPermutation("permutation does not match the pattern size")
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (pattern.nnz,):
        raise ValueError(f"expected {pattern.nnz} values, got {values.shape}")
    b = np.asarray(b, dtype=np.float64)

    inv = invert_permutation(perm)
    rows, cols = pattern.to_coo()
    pr, pc = inv[rows], inv[cols]
    keep = pr >= pc
    lr, lc, lv = pr[keep], pc[keep], values[keep]
    order = np.lexsort((lr, lc))  # column-major lower triangle
    lr, lc, lv = lr[order], lc[order], lv[order]
    col_counts = np.bincount(lc, minlength=n) if lc.size else np.zeros(n, np.int64)
    acol_starts = _counts_to_starts(col_counts)

    row_patterns = _factor_row_patterns(pattern, perm)
    col_rows: list[list[int]] = [[j] for j in range(n)]
    for i in range(n):
        for k in row_patterns[i]:
            col_rows[k].append(i)
    col_rows_arr = [np.array(r, dtype=np.int64) for r in col_rows]
    col_vals: list[np.ndarray] = [None] * n  # type: ignore[list-item]

    scratch = np.zeros(n, dtype=np.float64)
    for j in range(n):
        a_slice = slice(acol_starts[j], acol_starts[j + 1])
        scratch[lr[a_slice]] = lv[a_slice]
        for k in row_patterns[j]:
            rk, vk = col_rows_arr[k], col_vals[k]
            pos = int(np.searchsorted(rk, j))
            scratch[rk[pos:]] -= vk[pos] * vk[pos:]
        pivot = scratch[j]
        if not np.isfinite(pivot) or pivot <= 0.0:
            raise NotPositiveDefinite(f"nonpositive pivot at column {j}: {pivot!r}")
        rj = col_rows_arr[j]
        out = np.empty(rj.size, dtype=np.float64)
        root = np.sqrt(pivot)
        out[0] = root
        out[1:] = scratch[rj[1:]] / root
        col_vals[j] = out
        scratch[rj] = 0.0

    # forward then backward substitution, column-oriented
    y = b[perm].astype(np.float64)
    for j in range(n):
        rj, vj = col_rows_arr[j], col_vals[j]
        y[j] /= vj[0]
        if rj.size > 1:
            y[rj[1:]] -= y[j] * vj[1:]
    z = y
    for j in range(n - 1, -1, -1):
        rj, vj = col_rows_arr[j], col_vals[j]
        acc = z[j]
        if rj.size > 1:
            acc -= float(np.dot(vj[1:], z[rj[1:]]))
        z[j] = acc / vj[0]

    x = np.empty(n, dtype=np.float64)
    x[perm] = z
    ax = np.zeros(n, dtype=np.float64)
    np.add.at(ax, rows, values * x[cols])
    bnorm = float(np.linalg.norm(b))
    residual = float(np.linalg.norm(ax - b)) / (bnorm if bnorm > 0 else 1.0)
    return x, residual


def fill_deviation(
    perm_candidate: np.ndarray, perm_baseline: np.ndarray, pattern: SparsityPattern
) -> float:
    """Signed relative nnz(L) difference of a candidate vs a baseline ordering."""
    a = symbolic_analyze(pattern, perm_candidate).nnz_l
    b = symbolic_analyze(pattern, perm_baseline).nnz_l
    return (a - b) / b
