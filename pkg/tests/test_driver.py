import numpy as np
import pytest

from parth import (
    InvalidMap,
    Parth,
    ParthConfig,
    grid_laplacian,
    inject_contacts,
    is_permutation,
    patch_remesh,
    reuse_ratio,
)


def test_start_then_fixed_point():
    pattern, _ = grid_laplacian(10, 10)
    parth = Parth(ParthConfig(max_level=3, seed=2))
    first = parth.start(pattern)
    assert is_permutation(first.matrix_perm, 100)
    dirty, again = parth.step(pattern)
    assert reuse_ratio(again, 100) == 1.0
    assert np.array_equal(first.matrix_perm, again.matrix_perm)


def test_step_before_start_raises():
    from parth.driver import StateError

    pattern, _ = grid_laplacian(4, 4)
    with pytest.raises(StateError):
        Parth().step(pattern)


def test_dimension_change_requires_map():
    p1, _ = grid_laplacian(6, 6)
    p2, _ = grid_laplacian(6, 7)
    parth = Parth(ParthConfig(max_level=2))
    parth.start(p1)
    with pytest.raises(InvalidMap):
        parth.step(p2)


def test_remesh_sequence_stays_consistent():
    pattern, _ = grid_laplacian(16, 16)
    parth = Parth(ParthConfig(max_level=3, aggressive=True, theta=0.4, seed=1))
    parth.start(pattern)
    rng = np.random.default_rng(3)
    for k in range(5):
        center = int(rng.integers(pattern.n_rows))
        pattern, node_map = patch_remesh(pattern, center, 1, densify=1.2, seed=k)
        dirty, state = parth.step(pattern, node_map)
        assert is_permutation(state.matrix_perm, pattern.n_rows)
        assert parth.tree.separator_violations(parth.graph) == []


def test_tiny_graphs():
    from parth import SparsityPattern

    for n in (1, 2, 3):
        pattern = SparsityPattern.from_coo(n, np.arange(n), np.arange(n))
        parth = Parth(ParthConfig())
        state = parth.start(pattern)
        assert is_permutation(state.matrix_perm, n)
        dirty, again = parth.step(pattern)
        assert reuse_ratio(again, n) == 1.0


def test_non_monotone_relabel_keeps_bijection():
    # renumbering that scrambles sorted order: stored orderings stay usable
    from parth import NodeMap

    pattern, _ = grid_laplacian(8, 8)
    parth = Parth(ParthConfig(max_level=2))
    parth.start(pattern)
    rng = np.random.default_rng(13)
    relabel = rng.permutation(64)  # new index of each old node
    rows, cols = pattern.to_coo()
    shuffled = type(pattern).from_coo(64, relabel[rows], relabel[cols])
    entries = np.empty(64, dtype=np.int64)
    entries[relabel] = np.arange(64)  # entries[new] = old
    dirty, state = parth.step(shuffled, NodeMap(entries))
    assert is_permutation(state.matrix_perm, 64)
    assert parth.tree.separator_violations(parth.graph) == []


def test_reset_starts_fresh():
    pattern, _ = grid_laplacian(8, 8)
    parth = Parth(ParthConfig(max_level=2))
    a = parth.start(pattern).matrix_perm
    parth.step(inject_contacts(pattern, 10, 2, 4, seed=0))
    parth.reset()
    b = parth.start(pattern).matrix_perm
    assert np.array_equal(a, b)
