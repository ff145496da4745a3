"""
小规模实例的暴力极小极大预言机，作为所有求解器的基准答案。

记忆化键包含完整的历史查询集合，不做任何剪枝，保持足够简单以便信任。
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Optional, Tuple, Union

from infra.memo import MemoTable
from infra.settings import SolverLimits, solver_limits

from .costs import CostModel, TargetDistribution, distance_function, make_cost, validate
from .errors import SearchInputError, SizeLimitError
from .graph import Tree, VertexSet, path, set_key, split_at
from .minimax import recursion_limit
from .strategy import SearchTree

logger = logging.getLogger(__name__)


@dataclass
class OracleResult:
    value: Union[int, Fraction]
    strategy: SearchTree
    nodes_explored: int = 0


def _limit(n: int, limit: int, label: str) -> None:
    if n > limit:
        raise SizeLimitError(f"{label} 预言机只接受 n ≤ {limit}，收到 n={n}")


def brute_force_line(n: int, c: CostModel, limits: Optional[SolverLimits] = None) -> OracleResult:
    limits = limits or solver_limits
    _limit(n, limits.oracle_line_max_n, "路径")
    validate(c, n).raise_for_violation()
    g = make_cost(c, path(n))
    memo = MemoTable("oracle-line")
    choice: Dict[Tuple[int, int, FrozenSet[int]], int] = {}

    def solve(L: int, R: int, Q: FrozenSet[int]) -> int:
        key = (L, R, Q)
        cached = memo.get(key)
        if cached is not None:
            return cached
        best: Optional[int] = None
        for q in range(L + 1, R):
            assert q not in Q, "查询了已排除的顶点"
            value = sum(g(prior, q) for prior in Q)
            grown = Q | {q}
            if q > L + 1:
                value = max(value, solve(L, q, grown))
            if q < R - 1:
                value = max(value, solve(q, R, grown))
            if best is None or value < best:
                best = value
                choice[key] = q
        assert best is not None
        return memo.put(key, best)

    def build(L: int, R: int, Q: FrozenSet[int]) -> SearchTree:
        q = choice[(L, R, Q)]
        grown = Q | {q}
        kids = []
        if q > L + 1:
            kids.append(build(L, q, grown))
        if q < R - 1:
            kids.append(build(q, R, grown))
        return SearchTree(q, tuple(kids))

    with recursion_limit(limits.recursion_limit):
        value = solve(0, n + 1, frozenset())
        strategy = build(0, n + 1, frozenset())
    logger.debug("路径预言机：n=%d，值=%d，状态 %d", n, value, len(memo))
    return OracleResult(value=value, strategy=strategy, nodes_explored=len(memo))


def brute_force_tree(t: Tree, c: CostModel, limits: Optional[SolverLimits] = None) -> OracleResult:
    limits = limits or solver_limits
    _limit(t.n, limits.oracle_tree_max_n, "树")
    distance_function(c)
    validate(c, t.n).raise_for_violation()
    g = make_cost(c, t)
    memo = MemoTable("oracle-tree")
    choice: Dict[Tuple[int, int], int] = {}

    def solve(S: VertexSet, Q: FrozenSet[int]) -> int:
        key = (set_key(S), set_key(Q))
        cached = memo.get(key)
        if cached is not None:
            return cached
        best: Optional[int] = None
        for q in sorted(S):
            assert q not in Q, "查询了已排除的顶点"
            value = sum(g(prior, q) for prior in Q)
            grown = Q | {q}
            for _, component in split_at(t, S, q):
                value = max(value, solve(component, grown))
            if best is None or value < best:
                best = value
                choice[key] = q
        assert best is not None
        return memo.put(key, best)

    def build(S: VertexSet, Q: FrozenSet[int]) -> SearchTree:
        q = choice[(set_key(S), set_key(Q))]
        grown = Q | {q}
        return SearchTree(q, tuple(build(component, grown) for _, component in split_at(t, S, q)))

    with recursion_limit(limits.recursion_limit):
        everything = frozenset(t.vertices())
        value = solve(everything, frozenset())
        strategy = build(everything, frozenset())
    logger.debug("树预言机：n=%d，值=%d，状态 %d", t.n, value, len(memo))
    return OracleResult(value=value, strategy=strategy, nodes_explored=len(memo))


def brute_force_expected_line(
    n: int, c: CostModel, d: TargetDistribution, limits: Optional[SolverLimits] = None
) -> OracleResult:
    """期望代价按区间分解，因此只需以 (L, R) 为键穷举。"""
    limits = limits or solver_limits
    _limit(n, limits.oracle_expected_max_n, "期望")
    if d.n != n:
        raise SearchInputError(f"分布长度 {d.n} 与 n={n} 不一致")
    validate(c, n).raise_for_violation()
    g = make_cost(c, path(n))
    memo: Dict[Tuple[int, int], Fraction] = {}
    choice: Dict[Tuple[int, int], int] = {}

    def solve(L: int, R: int) -> Fraction:
        if R - L <= 1:
            return Fraction(0)
        if (L, R) in memo:
            return memo[(L, R)]
        best: Optional[Fraction] = None
        for q in range(L + 1, R):
            value = sum((d.p(t) * g(q, t) for t in range(L + 1, R)), Fraction(0))
            value += solve(L, q) + solve(q, R)
            if best is None or value < best:
                best = value
                choice[(L, R)] = q
        assert best is not None
        memo[(L, R)] = best
        return best

    def build(L: int, R: int) -> Optional[SearchTree]:
        if R - L <= 1:
            return None
        q = choice[(L, R)]
        kids = tuple(child for child in (build(L, q), build(q, R)) if child is not None)
        return SearchTree(q, kids)

    value = solve(0, n + 1)
    strategy = build(0, n + 1)
    assert strategy is not None
    return OracleResult(value=value, strategy=strategy, nodes_explored=len(memo))
