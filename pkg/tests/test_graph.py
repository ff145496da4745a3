from __future__ import annotations

import random

import pytest

from datahub.instances import random_tree
from engine.errors import SearchInputError
from engine.graph import (
    Tree,
    boundary,
    components_after_removal,
    convex_hull,
    distance,
    induced_leaves,
    is_connected_set,
    leaf_centroid,
    path,
    set_key,
    split_at,
)


def test_path_distance_and_line_flag():
    t = path(10)
    assert t.is_line
    assert distance(t, 2, 9) == 7
    assert distance(t, 4, 4) == 0


def test_spider_distance(spider_tree):
    assert not spider_tree.is_line
    assert distance(spider_tree, 3, 10) == 5
    assert distance(spider_tree, 5, 7) == 4


def test_distance_rejects_unknown_vertex(path10):
    with pytest.raises(SearchInputError):
        distance(path10, 0, 3)
    with pytest.raises(SearchInputError):
        distance(path10, 3, 11)


@pytest.mark.parametrize(
    "n, edges",
    [
        (3, [(1, 2)]),
        (3, [(1, 2), (2, 3), (1, 3)]),
        (4, [(1, 2), (2, 1), (3, 4)]),
        (4, [(1, 2), (3, 4), (1, 1)]),
        (3, [(1, 2), (2, 4)]),
    ],
)
def test_tree_rejects_malformed_edges(n, edges):
    with pytest.raises(SearchInputError):
        Tree.from_edges(n, edges)


def test_edges_are_normalized():
    t = Tree.from_edges(3, [(3, 2), (2, 1)])
    assert t.edges == ((1, 2), (2, 3))
    assert t.is_line


def test_components_after_removal_sorted_by_min_id(spider_tree):
    parts = components_after_removal(spider_tree, range(1, 11), 1)
    assert parts == [frozenset({2, 3}), frozenset({4, 5}), frozenset({6, 7}), frozenset({8, 9, 10})]


def test_components_after_removal_leaf_and_errors(path10):
    assert components_after_removal(path10, {1, 2, 3}, 1) == [frozenset({2, 3})]
    assert components_after_removal(path10, {4}, 4) == []
    with pytest.raises(SearchInputError):
        components_after_removal(path10, {1, 3}, 1)
    with pytest.raises(SearchInputError):
        components_after_removal(path10, {1, 2}, 5)


def test_split_at_reports_neighbors(spider_tree):
    parts = split_at(spider_tree, frozenset({1, 8, 9, 10}), 9)
    assert parts == [(8, frozenset({1, 8})), (10, frozenset({10}))]


def test_boundary(spider_tree, path10):
    assert boundary(spider_tree, {1, 8}) == frozenset({2, 4, 6, 9})
    assert boundary(path10, range(1, 11)) == frozenset()
    assert boundary(path10, {4, 5, 6}) == frozenset({3, 7})


def test_convex_hull(spider_tree):
    assert convex_hull(spider_tree, {3, 5}) == frozenset({1, 2, 3, 4, 5})
    assert convex_hull(spider_tree, {2, 4, 6}) == frozenset({1, 2, 4, 6})
    assert convex_hull(spider_tree, {7}) == frozenset({7})


def test_leaf_centroid_of_star_hull(spider_tree):
    assert leaf_centroid(spider_tree, {1, 2, 4, 6}) == 1


def test_leaf_centroid_rejects_small_or_disconnected(spider_tree):
    with pytest.raises(SearchInputError):
        leaf_centroid(spider_tree, {1, 2})
    with pytest.raises(SearchInputError):
        leaf_centroid(spider_tree, {3, 5, 7})


def test_leaf_centroid_balances_random_trees():
    rng = random.Random(7)
    for _ in range(40):
        t = random_tree(rng.randint(3, 14), rng)
        members = frozenset(t.vertices())
        leaves = induced_leaves(t, members)
        v = leaf_centroid(t, members)
        assert v not in leaves
        for _, component in split_at(t, members, v):
            assert len(induced_leaves(t, component)) <= len(leaves) // 2 + 1


def test_set_key_and_connectivity(spider_tree):
    assert set_key({1, 3}) == set_key([3, 1]) == (1 << 1) | (1 << 3)
    assert is_connected_set(spider_tree, frozenset({1, 2, 3}))
    assert not is_connected_set(spider_tree, frozenset({3, 5}))
    assert not is_connected_set(spider_tree, frozenset())
