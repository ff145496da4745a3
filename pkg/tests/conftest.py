from __future__ import annotations

import random
import sys
from pathlib import Path
from typing import Iterable

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from engine.graph import Tree, path  # noqa: E402
from engine.strategy import SearchTree  # noqa: E402


def node(label: int, *children: SearchTree) -> SearchTree:
    return SearchTree(label, tuple(children))


def leaf(label: int) -> SearchTree:
    return SearchTree(label)


def chain(labels: Iterable[int]) -> SearchTree:
    built = None
    for label in reversed(list(labels)):
        built = SearchTree(label, (built,) if built is not None else ())
    assert built is not None
    return built


@pytest.fixture
def linear_n10_strategy() -> SearchTree:
    """n=10、线性代价下代价为 6 的手工策略。"""
    return node(5, node(2, leaf(1), node(3, leaf(4))), node(9, node(7, leaf(6), leaf(8)), leaf(10)))


@pytest.fixture
def pricing_n19_strategy() -> SearchTree:
    """定价遗憾下最坏代价 17 的 19 顶点策略。"""
    left = node(8, node(6, node(4, chain([3, 2, 1]), leaf(5)), leaf(7)), chain([9, 10, 11]))
    right = node(15, node(13, leaf(14)), chain([16, 17, 18, 19]))
    return node(12, left, right)


@pytest.fixture
def spider_tree() -> Tree:
    """中心 1 带四条腿：2-3、4-5、6-7、8-9-10。"""
    return Tree.from_edges(10, [(1, 2), (2, 3), (1, 4), (4, 5), (1, 6), (6, 7), (1, 8), (8, 9), (9, 10)])


@pytest.fixture
def spider_left_strategy() -> SearchTree:
    return node(2, leaf(3), node(4, leaf(5), node(6, leaf(7), node(9, node(1, leaf(8)), leaf(10)))))


@pytest.fixture
def spider_right_strategy() -> SearchTree:
    return node(2, leaf(3), node(4, leaf(5), node(6, node(1, node(9, leaf(8), leaf(10))), leaf(7))))


@pytest.fixture
def star4() -> Tree:
    return Tree.from_edges(5, [(1, 2), (1, 3), (1, 4), (1, 5)])


@pytest.fixture
def path10() -> Tree:
    return path(10)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)
