"""
树上搜索树（STT）：表示、校验、代价评估、对手模拟、旋转/提升与 k-cut 转换。

STT 的标签与底层树的顶点一一对应，因此节点直接以标签标识。SearchTree 不可变，
所有变换都返回新树；内部变换在 _EditableTree 上进行后再冻结。
"""

from __future__ import annotations

import abc
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import graphviz
from pydantic import ValidationError

from schemas.strategy import StrategyNode

from .costs import CostModel, make_cost
from .errors import SearchInputError, StrategyFormatError
from .graph import Tree, VertexSet, boundary, convex_hull, leaf_centroid, split_at

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchTree:
    """以查询顶点为标签的有根树；子树按根标签升序排列。"""

    label: int
    children: Tuple["SearchTree", ...] = ()

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.children, key=lambda child: child.label))
        object.__setattr__(self, "children", ordered)

    def nodes(self) -> Iterator["SearchTree"]:
        """先序遍历（子节点升序）。"""
        stack: List[SearchTree] = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def labels(self) -> List[int]:
        return [node.label for node in self.nodes()]

    def feasible_set(self) -> VertexSet:
        return frozenset(self.labels())

    def find(self, label: int) -> Optional["SearchTree"]:
        for node in self.nodes():
            if node.label == label:
                return node
        return None

    @property
    def size(self) -> int:
        return sum(1 for _ in self.nodes())


def parent_map(s: SearchTree) -> Dict[int, Optional[int]]:
    parents: Dict[int, Optional[int]] = {s.label: None}
    for node in s.nodes():
        for child in node.children:
            parents[child.label] = node.label
    return parents


def feasible_sets(s: SearchTree) -> Dict[int, VertexSet]:
    """每个节点的可行集：自身与全部后代的标签。"""
    order = list(s.nodes())
    result: Dict[int, VertexSet] = {}
    for node in reversed(order):
        members = {node.label}
        for child in node.children:
            members |= result[child.label]
        result[node.label] = frozenset(members)
    return result


@dataclass
class StrategyValidation:
    ok: bool = True
    reason: Optional[str] = None
    node: Optional[int] = None

    def raise_for_violation(self) -> None:
        if not self.ok:
            raise SearchInputError(f"策略不合法：{self.reason}（节点 {self.node}）")


def validate_stt(t: Tree, s: SearchTree) -> StrategyValidation:
    labels = s.labels()
    if len(labels) != len(set(labels)):
        duplicated = next(label for label in labels if labels.count(label) > 1)
        return StrategyValidation(False, "标签重复，不是双射", duplicated)
    if sorted(labels) != list(t.vertices()):
        stray = sorted(set(labels) ^ set(t.vertices()))
        return StrategyValidation(False, "标签集合与树的顶点集合不一致", stray[0] if stray else None)

    sizes = {label: len(members) for label, members in feasible_sets(s).items()}
    stack: List[Tuple[SearchTree, VertexSet]] = [(s, frozenset(t.vertices()))]
    while stack:
        node, feasible = stack.pop()
        if node.label not in feasible:
            return StrategyValidation(False, "节点标签不在其可行集中", node.label)
        parts = split_at(t, feasible, node.label)
        if len(parts) != len(node.children):
            return StrategyValidation(
                False, f"子节点数 {len(node.children)} 与剩余分量数 {len(parts)} 不符", node.label
            )
        used = set()
        for child in node.children:
            index = next((i for i, (_, comp) in enumerate(parts) if child.label in comp), None)
            if index is None or index in used:
                return StrategyValidation(False, "子树没有对应到独立的连通分量", child.label)
            used.add(index)
            component = parts[index][1]
            if sizes[child.label] != len(component):
                return StrategyValidation(False, "子树标签与连通分量不一致", child.label)
            stack.append((child, component))
    return StrategyValidation()


def cost_for_target(t: Tree, c: CostModel, s: SearchTree, target: int) -> int:
    """根到目标路径上各查询代价之和（目标本身的查询免费）。"""
    t.check_vertex(target)
    g = make_cost(c, t)
    parents = parent_map(s)
    if target not in parents:
        raise SearchInputError(f"策略中不存在标签 {target}")
    total = 0
    current = parents[target]
    while current is not None:
        total += g(current, target)
        current = parents[current]
    return total


def target_costs(t: Tree, c: CostModel, s: SearchTree) -> Dict[int, int]:
    """一次深度优先遍历求出所有目标的代价。"""
    g = make_cost(c, t)
    costs: Dict[int, int] = {}
    stack: List[Tuple[SearchTree, Tuple[int, ...]]] = [(s, ())]
    while stack:
        node, ancestors = stack.pop()
        costs[node.label] = sum(g(q, node.label) for q in ancestors)
        if node.children:
            below = ancestors + (node.label,)
            stack.extend((child, below) for child in node.children)
    return costs


def worst_case_cost(t: Tree, c: CostModel, s: SearchTree) -> Tuple[int, int]:
    """最坏情况代价及取到它的目标（并列时取最小编号）。"""
    costs = target_costs(t, c, s)
    target = min(costs, key=lambda v: (-costs[v], v))
    return costs[target], target


class Adversary(abc.ABC):
    """模拟中回答查询的对手策略。"""

    name: str

    def check(self, t: Tree) -> None:
        """在模拟开始前校验适用范围。"""

    @abc.abstractmethod
    def respond(self, q: int, parts: Sequence[Tuple[int, VertexSet]]) -> Optional[int]:
        """返回所指向分量在 parts 中的下标；None 表示命中。"""


@dataclass
class FixedTarget(Adversary):
    target: int
    name: str = field(default="fixed-target", init=False)

    def check(self, t: Tree) -> None:
        t.check_vertex(self.target)

    def respond(self, q: int, parts: Sequence[Tuple[int, VertexSet]]) -> Optional[int]:
        if q == self.target:
            return None
        for index, (_, component) in enumerate(parts):
            if self.target in component:
                return index
        raise SearchInputError(f"目标 {self.target} 已被排除，策略不合法")


@dataclass
class LargerSide(Adversary):
    """总是指向剩余较长的一侧；等长时取较低区间，只要还有分量就不承认命中。"""

    name: str = field(default="larger-side", init=False)

    def check(self, t: Tree) -> None:
        if not t.is_line:
            raise SearchInputError("larger-side 对手只适用于路径")

    def respond(self, q: int, parts: Sequence[Tuple[int, VertexSet]]) -> Optional[int]:
        if not parts:
            return None
        best = 0
        for index, (_, component) in enumerate(parts):
            if len(component) > len(parts[best][1]):
                best = index
        return best


@dataclass
class Transcript:
    queries: List[int] = field(default_factory=list)
    responses: List[object] = field(default_factory=list)
    target: Optional[int] = None
    total_cost: int = 0

    def to_dict(self) -> dict:
        return {
            "queries": self.queries,
            "responses": self.responses,
            "target": self.target,
            "total_cost": self.total_cost,
        }


def simulate(t: Tree, c: CostModel, s: SearchTree, adversary: Adversary) -> Transcript:
    """按对手回答重放策略；每个回答为 "hit" 或查询点朝目标方向的邻居。"""
    adversary.check(t)
    g = make_cost(c, t)
    transcript = Transcript()
    node = s
    feasible: VertexSet = frozenset(t.vertices())
    while True:
        q = node.label
        transcript.queries.append(q)
        parts = split_at(t, feasible, q)
        choice = adversary.respond(q, parts)
        if choice is None:
            transcript.responses.append("hit")
            transcript.target = q
            break
        neighbor, feasible = parts[choice]
        transcript.responses.append(neighbor)
        nxt = next((child for child in node.children if child.label in feasible), None)
        if nxt is None:
            raise SearchInputError(f"策略在节点 {q} 处缺少指向 {neighbor} 方向的子树")
        node = nxt
    target = transcript.target
    transcript.total_cost = sum(g(q, target) for q in transcript.queries)
    logger.debug("模拟 %s：查询 %s，目标 %s，代价 %d", adversary.name, transcript.queries, target, transcript.total_cost)
    return transcript


def is_between(t: Tree, v: int, u: int, w: int) -> bool:
    """v 位于 T \\ {u, w} 中同时邻接 u、w 的那个分量里。"""
    if v in (u, w):
        return False
    from_v = t.distances_from(v)
    from_u = t.distances_from(u)
    from_w = t.distances_from(w)
    w_on_vu = from_v[w] + from_w[u] == from_v[u]
    u_on_vw = from_v[u] + from_u[w] == from_v[w]
    return not w_on_vu and not u_on_vw


class _EditableTree:
    """旋转与提升使用的可变父子表示。"""

    def __init__(self, s: SearchTree) -> None:
        self.root = s.label
        self.children: Dict[int, List[int]] = {}
        self.parent: Dict[int, Optional[int]] = {s.label: None}
        for node in s.nodes():
            self.children[node.label] = [child.label for child in node.children]
            for child in node.children:
                self.parent[child.label] = node.label

    def subtree(self, u: int) -> VertexSet:
        members = []
        stack = [u]
        while stack:
            current = stack.pop()
            members.append(current)
            stack.extend(self.children[current])
        return frozenset(members)

    def ancestors(self, u: int) -> List[int]:
        chain = []
        current = self.parent[u]
        while current is not None:
            chain.append(current)
            current = self.parent[current]
        return chain

    def rotate(self, t: Tree, u: int) -> None:
        p = self.parent.get(u)
        if p is None:
            raise SearchInputError(f"节点 {u} 是根，无法旋转")
        grand = self.parent[p]
        moving = [child for child in self.children[u] if is_between(t, child, u, p)]
        self.children[u] = [child for child in self.children[u] if child not in moving] + [p]
        self.children[p] = [child for child in self.children[p] if child != u] + moving
        for child in moving:
            self.parent[child] = p
        self.parent[p] = u
        self.parent[u] = grand
        if grand is None:
            self.root = u
        else:
            self.children[grand] = [u if child == p else child for child in self.children[grand]]

    def promote(self, t: Tree, u: int, x: int) -> int:
        if x not in self.ancestors(u):
            raise SearchInputError(f"节点 {x} 不是 {u} 的真祖先")
        steps = 0
        while True:
            p = self.parent[u]
            self.rotate(t, u)
            steps += 1
            if p == x:
                return steps

    def freeze(self) -> SearchTree:
        order: List[int] = []
        stack = [self.root]
        while stack:
            current = stack.pop()
            order.append(current)
            stack.extend(self.children[current])
        built: Dict[int, SearchTree] = {}
        for label in reversed(order):
            built[label] = SearchTree(label, tuple(built[child] for child in self.children[label]))
        return built[self.root]


def _require_label(s: SearchTree, label: int) -> None:
    if s.find(label) is None:
        raise SearchInputError(f"策略中不存在标签 {label}")


def rotate(t: Tree, s: SearchTree, label: int) -> SearchTree:
    """把节点 label 朝其父节点旋转。"""
    _require_label(s, label)
    editable = _EditableTree(s)
    editable.rotate(t, label)
    return editable.freeze()


def promote(t: Tree, s: SearchTree, label: int, ancestor: int) -> SearchTree:
    """连续旋转，直到 label 占据 ancestor 原来的位置。"""
    _require_label(s, label)
    editable = _EditableTree(s)
    editable.promote(t, label, ancestor)
    return editable.freeze()


def is_kcut(t: Tree, s: SearchTree, k: int) -> bool:
    return all(len(boundary(t, members)) <= k for members in feasible_sets(s).values())


def convert_to_kcut(t: Tree, s: SearchTree, k: int) -> SearchTree:
    """
    自顶向下把 STT 转成 k-cut STT。

    按字典序先序遍历；当节点 u 的可行集边界达到 k 且其某个子节点的边界超过 k 时，
    把 ch(∂Feas(u)) 的叶重心提升到 u 的位置，然后继续处理新节点的子树。
    """
    if k < 3:
        raise SearchInputError("k-cut 转换要求 k ≥ 3")
    editable = _EditableTree(s)
    promotions = 0
    stack = [editable.root]
    while stack:
        u = stack.pop()
        border = boundary(t, editable.subtree(u))
        if len(border) >= k and any(
            len(boundary(t, editable.subtree(child))) > k for child in editable.children[u]
        ):
            v = leaf_centroid(t, convex_hull(t, border))
            if v != u:
                editable.promote(t, v, u)
                promotions += 1
                u = v
        stack.extend(sorted(editable.children[u], reverse=True))
    logger.info("k-cut 转换完成：k=%d，提升 %d 次", k, promotions)
    return editable.freeze()


def max_inflation(t: Tree, c: CostModel, before: SearchTree, after: SearchTree) -> Optional[Fraction]:
    """逐目标比较两棵 STT 的代价，返回最大比值；原代价为 0 而新代价为正时返回 None。"""
    old = target_costs(t, c, before)
    new = target_costs(t, c, after)
    worst = Fraction(1)
    for target, cost in old.items():
        if cost == 0:
            if new[target] > 0:
                return None
            continue
        worst = max(worst, Fraction(new[target], cost))
    return worst


def to_dict(s: SearchTree) -> dict:
    built: Dict[int, dict] = {}
    for node in reversed(list(s.nodes())):
        built[node.label] = {"query": node.label, "children": [built[child.label] for child in node.children]}
    return built[s.label]


def from_dict(data: dict) -> SearchTree:
    try:
        document = StrategyNode.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first.get("loc", ()))
        raise StrategyFormatError(f"策略文档不合法（位置 {location or '<root>'}）：{first.get('msg')}") from exc
    built = _build(document)
    labels = built.labels()
    if len(labels) != len(set(labels)):
        raise StrategyFormatError("策略标签重复，不是双射")
    return built


def _build(document: StrategyNode) -> SearchTree:
    order: List[StrategyNode] = []
    stack = [document]
    while stack:
        current = stack.pop()
        order.append(current)
        stack.extend(current.children)
    built: Dict[int, SearchTree] = {}
    for node in reversed(order):
        built[id(node)] = SearchTree(node.query, tuple(built[id(child)] for child in node.children))
    return built[id(document)]


def to_json(s: SearchTree) -> str:
    return json.dumps(to_dict(s), ensure_ascii=False, indent=2)


def from_json(text: str, tree: Optional[Tree] = None) -> SearchTree:
    """解析策略 JSON；也接受外层带 "strategy" 字段的报告文档。"""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StrategyFormatError(f"策略 JSON 解析失败：第 {exc.lineno} 行第 {exc.colno} 列，{exc.msg}") from exc
    if isinstance(data, dict) and "strategy" in data and "query" not in data:
        data = data["strategy"]
    s = from_dict(data)
    if tree is not None:
        report = validate_stt(tree, s)
        if not report.ok:
            raise StrategyFormatError(f"策略与树不匹配：{report.reason}（节点 {report.node}）")
    return s


def to_dot(s: SearchTree, name: str = "strategy") -> str:
    dot = graphviz.Digraph(name=name)
    for node in s.nodes():
        dot.node(str(node.label), label=str(node.label))
        for child in node.children:
            dot.edge(str(node.label), str(child.label))
    return dot.source
