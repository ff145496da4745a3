"""
树上的 k-cut 动态规划。

可行集 S 的边界不超过 k，历史查询按进入 S 的接口顶点分组，每组以距离幂和
σ_m = Σ d(q, anchor)^m 概括。对 S 内任意顶点 v，这组查询的总代价只依赖 d(anchor, v)，
是关于该距离的 p 次多项式。各接口多项式之和给出 S 上的历史代价剖面，记忆化键即为该剖面。
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from infra.settings import SolverLimits, solver_limits

from .costs import SymmetricPoly, validate
from .errors import SearchInputError, SizeLimitError
from .graph import Tree, VertexSet, as_vertex_set, boundary, distance, is_connected_set, set_key, split_at
from .line_solver import opt_lower_bounds
from .minimax import MinimaxProgram, SolverStats, recursion_limit
from .strategy import SearchTree

logger = logging.getLogger(__name__)

PROFILE_CACHE_SIZE = 1 << 16


@dataclass(frozen=True)
class InterfaceSketch:
    anchor: int
    sigma: Tuple[int, ...]


@dataclass(frozen=True)
class TreeState:
    S: VertexSet
    interfaces: Tuple[InterfaceSketch, ...] = ()


@dataclass
class KcutSolveResult:
    value: int
    strategy: SearchTree
    k: int
    guarantee: Optional[Fraction]
    stats: SolverStats = field(default_factory=SolverStats)


def k_for_epsilon(epsilon: float) -> int:
    """(1+ε) 近似所需的 k = max(3, ⌈2/ε⌉)。"""
    if epsilon <= 0:
        raise SearchInputError("epsilon 必须为正")
    return max(3, math.ceil(2 / epsilon))


def kcut_guarantee(k: int) -> Optional[Fraction]:
    if k < 3:
        return None
    return 1 + Fraction(1, (k + 1) // 2 - 1)


def interface_vertices(t: Tree, S: Iterable[int]) -> List[int]:
    members = as_vertex_set(t, S)
    if not members or not is_connected_set(t, members):
        raise SearchInputError("接口顶点要求 S 非空且连通")
    return sorted(v for v in members if any(u not in members for u in t.adjacency[v]))


def shift_sketch(s: InterfaceSketch, r: int, new_anchor: int) -> InterfaceSketch:
    """σ'_m = Σ_j C(m,j)·r^j·σ_{m−j}。"""
    sigma = s.sigma
    shifted = tuple(sum(comb(m, j) * r**j * sigma[m - j] for j in range(m + 1)) for m in range(len(sigma)))
    return InterfaceSketch(new_anchor, shifted)


def merge_into_new_interface(
    q: int, outside_interfaces: Sequence[InterfaceSketch], v_new: int, t: Tree, degree: int
) -> InterfaceSketch:
    """把 q 本身与所有外侧接口的查询合并成 v_new 处的新草图。"""
    d = distance(t, q, v_new)
    sigma = [d**m for m in range(degree + 1)]
    for sketch in outside_interfaces:
        if len(sketch.sigma) != degree + 1:
            raise SearchInputError("接口草图次数不一致")
        shifted = shift_sketch(sketch, distance(t, sketch.anchor, v_new), v_new)
        for m in range(degree + 1):
            sigma[m] += shifted.sigma[m]
    return InterfaceSketch(v_new, tuple(sigma))


def candidate_queries(t: Tree, S: Iterable[int], k: int) -> List[int]:
    """使所有剩余分量的边界都不超过 k 的查询。"""
    members = as_vertex_set(t, S)
    result = []
    for q in sorted(members):
        if all(len(boundary(t, component)) <= k for _, component in split_at(t, members, q)):
            result.append(q)
    return result


class KcutProgram(MinimaxProgram[TreeState]):
    """
    状态 (S, 接口草图) 的真实值只取决于 S 的形状和历史代价剖面 f(v) = Σ_a P_a(d(a, v))。

    记忆化键用剖面（减去首个顶点的值作为偏移）代替各接口多项式，不同接口组合只要剖面
    一致就共享记录；按编号排列的路径上形状取 |S|，因此平移后的线段同样共享。
    """

    name = "tree-kcut"

    def __init__(self, t: Tree, c: SymmetricPoly, k: int, max_states: int) -> None:
        super().__init__(max_states)
        self.tree = t
        self.cost = c
        self.k = k
        self.p = c.degree
        self._rows = {v: t.distances_from(v) for v in t.vertices()}
        self._candidates: Dict[int, List[int]] = {}
        self._path_bounds: Dict[int, int] = {}
        self._profile = lru_cache(maxsize=PROFILE_CACHE_SIZE)(self._compute_profile)

    def root(self) -> TreeState:
        return TreeState(frozenset(self.tree.vertices()), ())

    def _polynomial(self, sketch: InterfaceSketch) -> Tuple[int, ...]:
        # 该组查询对距 anchor 为 r 的目标的代价：Σ_j r^j Σ_m β_m C(m,j) σ_{m−j}
        beta = self.cost.coeffs
        sigma = sketch.sigma
        return tuple(
            sum(beta[m] * comb(m, j) * sigma[m - j] for m in range(j, self.p + 1)) for j in range(self.p + 1)
        )

    def _compute_profile(self, state: TreeState) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        order = tuple(sorted(state.S))
        values = [0] * len(order)
        for sketch in state.interfaces:
            poly = self._polynomial(sketch)
            row = self._rows[sketch.anchor]
            for i, v in enumerate(order):
                r = row[v]
                acc = 0
                for coef in reversed(poly):
                    acc = acc * r + coef
                values[i] += acc
        return order, tuple(values)

    def _shape(self, S: VertexSet) -> Hashable:
        return len(S) if self.tree.is_line else set_key(S)

    def encode(self, state: TreeState) -> Tuple[Hashable, int]:
        _, values = self._profile(state)
        base = values[0]
        return (self._shape(state.S), tuple(v - base for v in values[1:])), base

    def _ordered_candidates(self, S: VertexSet) -> List[int]:
        key = set_key(S)
        cached = self._candidates.get(key)
        if cached is None:
            allowed = candidate_queries(self.tree, S, self.k)
            largest = {q: max((len(part) for _, part in split_at(self.tree, S, q)), default=0) for q in allowed}
            cached = sorted(allowed, key=lambda q: (largest[q], q))
            self._candidates[key] = cached
        return cached

    def candidates(self, state: TreeState) -> Sequence[int]:
        # 先试最均衡的切分，尽早得到可用于剪枝的上界
        return self._ordered_candidates(state.S)

    def hit_cost(self, state: TreeState, q: int) -> int:
        beta = self.cost.coeffs
        total = 0
        row = self._rows[q]
        for sketch in state.interfaces:
            shifted = shift_sketch(sketch, row[sketch.anchor], q)
            total += sum(b * s for b, s in zip(beta, shifted.sigma))
        return total

    def children(self, state: TreeState, q: int) -> List[TreeState]:
        kids = []
        for neighbor, component in split_at(self.tree, state.S, q):
            kept: Dict[int, InterfaceSketch] = {}
            outside = []
            for sketch in state.interfaces:
                if sketch.anchor in component:
                    kept[sketch.anchor] = sketch
                else:
                    outside.append(sketch)
            merged = merge_into_new_interface(q, outside, neighbor, self.tree, self.p)
            if neighbor in kept:
                previous = kept[neighbor].sigma
                merged = InterfaceSketch(neighbor, tuple(a + b for a, b in zip(previous, merged.sigma)))
            kept[neighbor] = merged
            kids.append(TreeState(component, tuple(kept[a] for a in sorted(kept))))
        return kids

    def _diameter_vertices(self, S: VertexSet) -> int:
        start = min(S)
        far = max(S, key=lambda v: (self._rows[start][v], v))
        return 1 + max(self._rows[far][v] for v in S)

    def lower_bound(self, state: TreeState) -> int:
        # 目标限定在 S 内最长路径上时，路径外的查询不提供信息，因此路径下界对整棵子树成立
        _, values = self._profile(state)
        length = self._diameter_vertices(state.S)
        bound = self._path_bounds.get(length)
        if bound is None:
            bound = max(opt_lower_bounds(length, self.cost))
            self._path_bounds[length] = bound
        return max(max(values), bound)

    def encode_choice(self, state: TreeState, q: int) -> Hashable:
        order, _ = self._profile(state)
        return order.index(q)

    def decode_choice(self, state: TreeState, stored: Hashable) -> int:
        order, _ = self._profile(state)
        return order[int(stored)]  # type: ignore[arg-type]


def solve_tree_kcut(
    t: Tree, c: SymmetricPoly, k: int, limits: Optional[SolverLimits] = None
) -> KcutSolveResult:
    """k-cut 策略中最坏情况代价最小者；k ≥ 3 时是 (1 + 1/(⌈k/2⌉−1)) 近似。"""
    if not isinstance(c, SymmetricPoly):
        raise SearchInputError(f"树上求解只支持 sym-poly 距离代价，收到 {c.kind}")
    if k < 2:
        raise SearchInputError("k 必须至少为 2")
    limits = limits or solver_limits
    if t.n > limits.tree_max_n:
        raise SizeLimitError(f"树的规模 n={t.n} 超过上限 {limits.tree_max_n}")
    validate(c, t.n).raise_for_violation()

    program = KcutProgram(t, c, k, limits.tree_max_states)
    root = program.root()
    start = time.perf_counter()
    with recursion_limit(limits.recursion_limit):
        value = program.value(root)
        strategy = extract_strategy(program)
    program.stats.wall_time_ms = int((time.perf_counter() - start) * 1000)
    logger.info(
        "k-cut 求解完成：n=%d，k=%d，值=%d，状态 %d，命中 %d，剪枝 %d，耗时 %dms",
        t.n,
        k,
        value,
        program.stats.states_expanded,
        program.stats.memo_hits,
        program.stats.pruned,
        program.stats.wall_time_ms,
    )
    return KcutSolveResult(value=value, strategy=strategy, k=k, guarantee=kcut_guarantee(k), stats=program.stats)


def extract_strategy(program: KcutProgram) -> SearchTree:
    """从已求解的状态表回放出最优 k-cut STT。"""
    return program.extract(program.root())
