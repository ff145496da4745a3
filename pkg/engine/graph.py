"""
搜索空间的树结构与结构性原语。

顶点编号对外统一从 1 开始；路径 1–2–…–n 也用 Tree 表示，并带有 is_line 标记，
线段求解器据此走区间算术的快速路径。Tree 与顶点集合在构造后不可变，可在线程间共享。
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

import networkx as nx

from .errors import SearchInputError

logger = logging.getLogger(__name__)

VertexSet = FrozenSet[int]


@dataclass(frozen=True)
class Tree:
    """n 个顶点的无向树，边以规范化（小编号在前、整体排序）的形式保存。"""

    n: int
    edges: Tuple[Tuple[int, int], ...]
    _adjacency: Dict[int, Tuple[int, ...]] = field(init=False, repr=False, compare=False, hash=False)
    _graph: nx.Graph = field(init=False, repr=False, compare=False, hash=False)
    _rows: Dict[int, Dict[int, int]] = field(init=False, repr=False, compare=False, hash=False)
    _is_line: bool = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise SearchInputError(f"顶点数必须是正整数，收到 {self.n!r}")
        normalized: List[Tuple[int, int]] = []
        for raw in self.edges:
            if len(raw) != 2:
                raise SearchInputError(f"边必须是二元组：{raw!r}")
            u, v = int(raw[0]), int(raw[1])
            for vertex in (u, v):
                if not 1 <= vertex <= self.n:
                    raise SearchInputError(f"边 {raw!r} 含非法顶点 {vertex}（合法范围 1..{self.n}）")
            if u == v:
                raise SearchInputError(f"不允许自环：{raw!r}")
            normalized.append((min(u, v), max(u, v)))
        normalized.sort()
        if len(set(normalized)) != len(normalized):
            raise SearchInputError("存在重复边")
        if len(normalized) != self.n - 1:
            raise SearchInputError(f"树需要恰好 {self.n - 1} 条边，收到 {len(normalized)} 条")

        graph = nx.Graph()
        graph.add_nodes_from(range(1, self.n + 1))
        graph.add_edges_from(normalized)
        if not nx.is_connected(graph):
            raise SearchInputError("边集不连通，无法构成树")

        adjacency = {v: tuple(sorted(graph.neighbors(v))) for v in range(1, self.n + 1)}
        is_line = all(edge == (i, i + 1) for i, edge in enumerate(normalized, start=1))
        object.__setattr__(self, "edges", tuple(normalized))
        object.__setattr__(self, "_adjacency", adjacency)
        object.__setattr__(self, "_graph", graph)
        object.__setattr__(self, "_rows", {})
        object.__setattr__(self, "_is_line", is_line)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Tree":
        return cls(n=n, edges=tuple(tuple(edge) for edge in edges))  # type: ignore[arg-type]

    @property
    def adjacency(self) -> Dict[int, Tuple[int, ...]]:
        return self._adjacency

    @property
    def is_line(self) -> bool:
        """是否为按编号顺序排列的路径 1–2–…–n。"""
        return self._is_line

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._adjacency[self.check_vertex(v)]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def check_vertex(self, v: int) -> int:
        if isinstance(v, bool) or not isinstance(v, int) or not 1 <= v <= self.n:
            raise SearchInputError(f"非法顶点 {v!r}（合法范围 1..{self.n}）")
        return v

    def distances_from(self, u: int) -> Dict[int, int]:
        """u 到所有顶点的距离，按源点惰性缓存。"""
        row = self._rows.get(u)
        if row is None:
            row = dict(nx.single_source_shortest_path_length(self._graph, self.check_vertex(u)))
            self._rows[u] = row
        return row


def path(n: int) -> Tree:
    """构造路径 1–2–…–n。"""
    return Tree.from_edges(n, [(i, i + 1) for i in range(1, n)])


def distance(t: Tree, u: int, v: int) -> int:
    t.check_vertex(u)
    t.check_vertex(v)
    if t.is_line:
        return abs(u - v)
    return t.distances_from(u)[v]


def as_vertex_set(t: Tree, members: Iterable[int]) -> VertexSet:
    """校验并返回规范化的顶点集合。"""
    result = frozenset(members)
    for v in result:
        t.check_vertex(v)
    return result


def set_key(members: Iterable[int]) -> int:
    """顶点集合的位图编码，作为记忆化表的确定性键。"""
    key = 0
    for v in members:
        key |= 1 << v
    return key


def is_connected_set(t: Tree, members: VertexSet) -> bool:
    if not members:
        return False
    start = min(members)
    return len(_reach(t, members, start, blocked=None)) == len(members)


def _reach(t: Tree, members: VertexSet, start: int, blocked: int | None) -> List[int]:
    seen = {start}
    queue = deque([start])
    order = [start]
    adjacency = t.adjacency
    while queue:
        current = queue.popleft()
        for nxt in adjacency[current]:
            if nxt == blocked or nxt in seen or nxt not in members:
                continue
            seen.add(nxt)
            order.append(nxt)
            queue.append(nxt)
    return order


def split_at(t: Tree, members: VertexSet, v: int) -> List[Tuple[int, VertexSet]]:
    """不做校验的快速版本：返回 (v 在分量中的邻居, 分量) 列表，按分量最小编号排序。"""
    parts = []
    for nxt in t.adjacency[v]:
        if nxt in members:
            parts.append((nxt, frozenset(_reach(t, members, nxt, blocked=v))))
    parts.sort(key=lambda item: min(item[1]))
    return parts


def components_after_removal(t: Tree, S: Iterable[int], v: int) -> List[VertexSet]:
    """S 删去 v 后的连通分量，按分量内最小编号排序。"""
    members = as_vertex_set(t, S)
    if v not in members:
        raise SearchInputError(f"顶点 {v} 不在集合中")
    if not is_connected_set(t, members):
        raise SearchInputError("集合在树中不连通")
    return [component for _, component in split_at(t, members, v)]


def boundary(t: Tree, S: Iterable[int]) -> VertexSet:
    members = as_vertex_set(t, S)
    adjacency = t.adjacency
    return frozenset(u for v in members for u in adjacency[v] if u not in members)


def convex_hull(t: Tree, S: Iterable[int]) -> VertexSet:
    """包含 S 的最小连通顶点集：反复剥离不在 S 中的叶子。"""
    members = as_vertex_set(t, S)
    if not members:
        raise SearchInputError("凸包需要非空集合")
    alive = set(t.vertices())
    degree = {v: len(t.adjacency[v]) for v in alive}
    queue = deque(v for v in alive if degree[v] <= 1 and v not in members)
    while queue:
        v = queue.popleft()
        if v not in alive:
            continue
        alive.discard(v)
        for u in t.adjacency[v]:
            if u in alive:
                degree[u] -= 1
                if degree[u] <= 1 and u not in members:
                    queue.append(u)
    return frozenset(alive)


def induced_leaves(t: Tree, S: Iterable[int]) -> VertexSet:
    members = as_vertex_set(t, S)
    if len(members) == 1:
        return members
    return frozenset(v for v in members if sum(1 for u in t.adjacency[v] if u in members) <= 1)


def leaf_centroid(t: Tree, S: Iterable[int]) -> int:
    """
    诱导子树的叶重心：删去后每个分量至多 ⌊ℓ/2⌋+1 片叶子（ℓ 为叶子数）。

    从编号最小的非叶顶点出发，只要存在叶子过多的分量就朝该分量移动一步。
    """
    members = as_vertex_set(t, S)
    if len(members) < 3:
        raise SearchInputError("叶重心要求诱导子树至少有 3 个顶点")
    if not is_connected_set(t, members):
        raise SearchInputError("集合在树中不连通")
    leaves = induced_leaves(t, members)
    bound = len(leaves) // 2 + 1
    current = min(members - leaves)
    visited = set()
    while True:
        visited.add(current)
        heavy = None
        for neighbor, component in split_at(t, members, current):
            if len(induced_leaves(t, component)) > bound:
                heavy = neighbor
                break
        if heavy is None:
            return current
        if heavy in visited:  # pragma: no cover - 叶重心总存在
            raise RuntimeError("叶重心搜索出现回退")
        logger.debug("叶重心搜索：%d -> %d", current, heavy)
        current = heavy
