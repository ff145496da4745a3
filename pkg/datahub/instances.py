"""
随机实例生成，用于性质测试与命令行的 --seed 入口。

所有生成器只接受显式传入的 random.Random，给定种子时结果完全确定。
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List

import networkx as nx

from engine.costs import AsymmetricPoly, SymmetricPoly, Tabulated, TargetDistribution
from engine.errors import SearchInputError
from engine.graph import Tree, split_at
from engine.strategy import SearchTree


def random_tree(n: int, rng: random.Random) -> Tree:
    """均匀随机的带标号树（随机 Prüfer 序列）。"""
    if n < 1:
        raise SearchInputError("n 必须为正")
    if n == 1:
        return Tree.from_edges(1, [])
    if n == 2:
        return Tree.from_edges(2, [(1, 2)])
    sequence = [rng.randrange(n) for _ in range(n - 2)]
    graph = nx.from_prufer_sequence(sequence)
    return Tree.from_edges(n, [(u + 1, v + 1) for u, v in graph.edges()])


def random_monotone_table(n: int, rng: random.Random, high: int = 10) -> Tabulated:
    """h(1..n−1) 取 [0, high] 上的有序随机抽样。"""
    values = sorted(rng.randint(0, high) for _ in range(max(n - 1, 1)))
    return Tabulated(tuple(values))


def random_poly(p: int, rng: random.Random, high: int = 5) -> SymmetricPoly:
    coeffs = [rng.randint(0, high) for _ in range(p + 1)]
    if not any(coeffs[1:]) and p >= 1:
        coeffs[1] = 1
    return SymmetricPoly(tuple(coeffs))


def random_asymmetric(p: int, rng: random.Random, high: int = 5) -> AsymmetricPoly:
    return AsymmetricPoly(random_poly(p, rng, high).coeffs, random_poly(p, rng, high).coeffs)


def random_distribution(n: int, rng: random.Random, high: int = 6) -> TargetDistribution:
    weights = [rng.randint(0, high) for _ in range(n)]
    if sum(weights) == 0:
        weights[rng.randrange(n)] = 1
    total = sum(weights)
    return TargetDistribution(tuple(Fraction(w, total) for w in weights))


def random_stt(t: Tree, rng: random.Random) -> SearchTree:
    """每个可行集内均匀随机选择查询顶点得到的合法 STT。"""
    records: List[tuple] = []
    stack: List[tuple] = [(frozenset(t.vertices()), None)]
    while stack:
        members, parent = stack.pop()
        q = rng.choice(sorted(members))
        index = len(records)
        records.append((q, []))
        if parent is not None:
            records[parent][1].append(index)
        for _, component in split_at(t, members, q):
            stack.append((component, index))
    built: Dict[int, SearchTree] = {}
    for index in reversed(range(len(records))):
        q, kids = records[index]
        built[index] = SearchTree(q, tuple(built[k] for k in kids))
    return built[0]
