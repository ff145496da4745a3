"""
路径上的求解器。

- 多项式距离代价（对称 / 非对称）：用幂和草图 CumCo 概括历史查询的精确动态规划；
- 双变量多项式代价（如定价遗憾）：用 CumCoT 草图的精确动态规划；
- 二分查找基线、上下界、阈值实例与 γ 策略；
- 已知目标分布下的 O(n³) 期望代价动态规划。

状态 (L, R, 草图) 的可行集为 {L+1..R−1}。历史查询对目标 t 的累计代价是 t 的 p 次多项式，
记忆化键取该多项式去掉常数项后的系数（距离代价再平移到以 L 为原点），常数项作为偏移加回。
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from infra.settings import SolverLimits, solver_limits

from .costs import (
    AsymmetricPoly,
    BivariatePoly,
    CostModel,
    SymmetricPoly,
    Tabulated,
    TargetDistribution,
    distance_function,
    make_cost,
    validate,
)
from .errors import SearchInputError
from .graph import path
from .minimax import MinimaxProgram, SolverStats, recursion_limit
from .strategy import SearchTree, target_costs

logger = logging.getLogger(__name__)

GAMMA = (math.sqrt(33) - 5) / 8


@dataclass(frozen=True)
class SketchVector:
    """a_j = Σ_{q∈Q} q^j，j = 0..p；side 标记查询位于区间下方 (minus) 还是上方 (plus)。"""

    coeffs: Tuple[int, ...]
    side: str = "minus"

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def with_query(self, q: int) -> "SketchVector":
        return SketchVector(tuple(a + q**j for j, a in enumerate(self.coeffs)), self.side)

    def __add__(self, other: "SketchVector") -> "SketchVector":
        if len(other.coeffs) != len(self.coeffs):
            raise SearchInputError("草图次数不一致，无法相加")
        return SketchVector(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.side)


@dataclass(frozen=True)
class BivariateSketchVector:
    """ã_j = Σ_{q} Σ_k γ_{k,j} q^k，按查询所在一侧选用 γ− 或 γ+。"""

    coeffs: Tuple[int, ...]

    def evaluate(self, t: int) -> int:
        total = 0
        for coef in reversed(self.coeffs):
            total = total * t + coef
        return total


@dataclass(frozen=True)
class LineState:
    L: int
    R: int
    sketches: Tuple[Union[SketchVector, BivariateSketchVector], ...]

    def __post_init__(self) -> None:
        if self.L >= self.R:
            raise SearchInputError(f"区间状态要求 L < R，收到 L={self.L}, R={self.R}")

    @property
    def feasible(self) -> range:
        return range(self.L + 1, self.R)


@dataclass
class SolveResult:
    value: Union[int, Fraction]
    strategy: SearchTree
    stats: SolverStats = field(default_factory=SolverStats)


def power_sums(Q: Iterable[int], p: int, side: str = "minus") -> SketchVector:
    if p < 0:
        raise SearchInputError("次数 p 必须非负")
    coeffs = [0] * (p + 1)
    for q in Q:
        for j in range(p + 1):
            coeffs[j] += q**j
    return SketchVector(tuple(coeffs), side)


def _sides(c: Union[SymmetricPoly, AsymmetricPoly]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    if isinstance(c, SymmetricPoly):
        return c.coeffs, c.coeffs
    if isinstance(c, AsymmetricPoly):
        return c.minus, c.plus
    raise SearchInputError(f"需要 sym-poly 或 asym-poly 代价，收到 {c.kind}")


def cost_polynomial(
    c: Union[SymmetricPoly, AsymmetricPoly], minus: SketchVector, plus: SketchVector
) -> Tuple[int, ...]:
    """历史查询对目标 t 的累计代价，表示为 t 的多项式系数 c_0..c_p。"""
    beta_minus, beta_plus = _sides(c)
    p = len(beta_minus) - 1
    a_minus = minus.coeffs
    a_plus = plus.coeffs
    result = []
    for j in range(p + 1):
        total = 0
        for m in range(j, p + 1):
            binom = comb(m, j)
            k = m - j
            total += binom * (beta_minus[m] * (-1) ** k * a_minus[k] + beta_plus[m] * (-1) ** j * a_plus[k])
        result.append(total)
    return tuple(result)


def seqcost_eval(
    c: Union[SymmetricPoly, AsymmetricPoly], a_minus: SketchVector, a_plus: SketchVector, t: int
) -> int:
    coeffs = cost_polynomial(c, a_minus, a_plus)
    total = 0
    for coef in reversed(coeffs):
        total = total * t + coef
    return total


def _translate(coeffs: Sequence[int], origin: int) -> Tuple[int, ...]:
    """P(s + origin) 关于 s 的系数。"""
    p = len(coeffs) - 1
    return tuple(
        sum(coeffs[j] * comb(j, i) * origin ** (j - i) for j in range(i, p + 1)) for i in range(p + 1)
    )


def _ordered_candidates(feasible: range) -> List[int]:
    mid = (feasible.start + feasible.stop - 1) // 2
    return sorted(feasible, key=lambda q: (abs(q - mid), q))


class LinePolyProgram(MinimaxProgram[LineState]):
    """距离多项式代价的路径动态规划；状态键对平移不变。"""

    name = "line-poly"

    def __init__(self, c: Union[SymmetricPoly, AsymmetricPoly], max_states: int) -> None:
        super().__init__(max_states)
        self.cost = c
        beta_minus, beta_plus = _sides(c)
        self.p = len(beta_minus) - 1
        self.symmetric = beta_minus == beta_plus
        self._symmetric_model = SymmetricPoly(beta_minus) if self.symmetric else None
        self._bounds: Dict[int, int] = {}

    def root(self, n: int) -> LineState:
        zero = (0,) * (self.p + 1)
        return LineState(0, n + 1, (SketchVector(zero, "minus"), SketchVector(zero, "plus")))

    def encode(self, state: LineState) -> Tuple[Hashable, int]:
        minus, plus = state.sketches
        local = _translate(cost_polynomial(self.cost, minus, plus), state.L)
        return (state.R - state.L, local[1:]), local[0]

    def candidates(self, state: LineState) -> Sequence[int]:
        return _ordered_candidates(state.feasible)

    def hit_cost(self, state: LineState, q: int) -> int:
        minus, plus = state.sketches
        return seqcost_eval(self.cost, minus, plus, q)

    def children(self, state: LineState, q: int) -> List[LineState]:
        minus, plus = state.sketches
        kids = []
        if q > state.L + 1:
            kids.append(LineState(state.L, q, (minus, plus.with_query(q))))
        if q < state.R - 1:
            kids.append(LineState(q, state.R, (minus.with_query(q), plus)))
        return kids

    def lower_bound(self, state: LineState) -> int:
        if self._symmetric_model is None:
            return 0
        size = state.R - state.L - 1
        bound = self._bounds.get(size)
        if bound is None:
            bound = max(opt_lower_bounds(size, self._symmetric_model))
            self._bounds[size] = bound
        return bound

    def encode_choice(self, state: LineState, q: int) -> Hashable:
        return q - state.L

    def decode_choice(self, state: LineState, stored: Hashable) -> int:
        return state.L + int(stored)  # type: ignore[arg-type]


class LineBivariateProgram(MinimaxProgram[LineState]):
    """双变量多项式代价的路径动态规划，状态为 (L, R, ã_0..ã_p)。"""

    name = "line-bivariate"

    def __init__(self, c: BivariatePoly, max_states: int) -> None:
        super().__init__(max_states)
        self.cost = c
        self.p = c.degree
        self._minus_rows = self._rows(c.side_terms("minus"))
        self._plus_rows = self._rows(c.side_terms("plus"))

    def _rows(self, terms) -> List[List[Tuple[int, int]]]:
        rows: List[List[Tuple[int, int]]] = [[] for _ in range(self.p + 1)]
        for (i, j), coef in terms:
            rows[j].append((i, coef))
        return rows

    def _gain(self, rows: List[List[Tuple[int, int]]], q: int) -> Tuple[int, ...]:
        return tuple(sum(coef * q**i for i, coef in rows[j]) for j in range(self.p + 1))

    def root(self, n: int) -> LineState:
        return LineState(0, n + 1, (BivariateSketchVector((0,) * (self.p + 1)),))

    def encode(self, state: LineState) -> Tuple[Hashable, int]:
        (tilde,) = state.sketches
        return (state.L, state.R, tilde.coeffs[1:]), tilde.coeffs[0]

    def candidates(self, state: LineState) -> Sequence[int]:
        return _ordered_candidates(state.feasible)

    def hit_cost(self, state: LineState, q: int) -> int:
        (tilde,) = state.sketches
        return tilde.evaluate(q)

    def children(self, state: LineState, q: int) -> List[LineState]:
        (tilde,) = state.sketches
        kids = []
        if q > state.L + 1:
            # 目标在 q 下方：q 报高了
            gain = self._gain(self._plus_rows, q)
            kids.append(LineState(state.L, q, (BivariateSketchVector(tuple(a + b for a, b in zip(tilde.coeffs, gain))),)))
        if q < state.R - 1:
            gain = self._gain(self._minus_rows, q)
            kids.append(LineState(q, state.R, (BivariateSketchVector(tuple(a + b for a, b in zip(tilde.coeffs, gain))),)))
        return kids


def _check_size(n: int) -> None:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise SearchInputError(f"n 必须是正整数，收到 {n!r}")


def _run(program: MinimaxProgram[LineState], root: LineState, limits: SolverLimits) -> SolveResult:
    start = time.perf_counter()
    with recursion_limit(limits.recursion_limit):
        value = program.value(root)
        strategy = program.extract(root)
    program.stats.wall_time_ms = int((time.perf_counter() - start) * 1000)
    logger.info(
        "%s 求解完成：n=%d，值=%d，状态 %d，命中 %d，剪枝 %d，耗时 %dms",
        program.name,
        root.R - 1,
        value,
        program.stats.states_expanded,
        program.stats.memo_hits,
        program.stats.pruned,
        program.stats.wall_time_ms,
    )
    return SolveResult(value=value, strategy=strategy, stats=program.stats)


def solve_line_poly(
    n: int, c: Union[SymmetricPoly, AsymmetricPoly], limits: Optional[SolverLimits] = None
) -> SolveResult:
    """多项式距离代价下路径上的最优最坏情况策略。"""
    _check_size(n)
    _sides(c)
    validate(c, n).raise_for_violation()
    limits = limits or solver_limits
    program = LinePolyProgram(c, limits.line_max_states)
    return _run(program, program.root(n), limits)


def solve_line_bivariate(n: int, c: BivariatePoly, limits: Optional[SolverLimits] = None) -> SolveResult:
    _check_size(n)
    if not isinstance(c, BivariatePoly):
        raise SearchInputError(f"需要 bivar-poly 代价，收到 {c.kind}")
    report = validate(c, n)
    report.raise_for_violation()
    for warning in report.warnings:
        logger.warning("代价模型单调性提示：%s", warning)
    limits = limits or solver_limits
    program = LineBivariateProgram(c, limits.line_max_states)
    return _run(program, program.root(n), limits)


def _bisect(lo: int, hi: int) -> Optional[SearchTree]:
    if lo > hi:
        return None
    mid = (lo + hi) // 2
    kids = [child for child in (_bisect(lo, mid - 1), _bisect(mid + 1, hi)) if child is not None]
    return SearchTree(mid, tuple(kids))


def binary_search_strategy(n: int) -> SearchTree:
    """每次查询可行区间的下中位数 ⌊(lo+hi)/2⌋。"""
    _check_size(n)
    strategy = _bisect(1, n)
    assert strategy is not None
    return strategy


def _h0(c: CostModel):
    h = distance_function(c)
    return lambda x: 0 if x <= 0 else h(x)


def bs_cost_upper_bound(n: int, c: CostModel) -> int:
    """Σ_{i=1}^{⌊log₂ n⌋} h(⌊n/2^i⌋)。"""
    _check_size(n)
    h = _h0(c)
    return sum(h(n >> i) for i in range(1, n.bit_length()))


def opt_lower_bounds(n: int, c: CostModel) -> Tuple[int, int, int]:
    """任何策略都无法低于的三个下界。"""
    if n < 1:
        return 0, 0, 0
    h = _h0(c)
    lb1 = h(n // 2)
    lb2 = h(n // 4) + h(n // 8)
    tail = sum(h(n >> i) for i in range(4, n.bit_length()))
    lb3 = (tail + 1) // 2
    return lb1, lb2, lb3


def _chain(lo: int, hi: int) -> Optional[SearchTree]:
    node: Optional[SearchTree] = None
    for label in range(hi, lo - 1, -1):
        node = SearchTree(label, (node,) if node is not None else ())
    return node


def _node(label: int, *children: Optional[SearchTree]) -> SearchTree:
    return SearchTree(label, tuple(child for child in children if child is not None))


def threshold_instance(n: int) -> Tuple[Tabulated, SearchTree]:
    """
    阈值代价 h(x) = [x ≥ ⌊n/4⌋] 及其代价为 1 的手工策略。

    先查 ⌈n/2⌉；两侧各自依次查 ⌈n/6⌉、⌈n/3⌉（右侧镜像），剩余短区间顺序查找。
    """
    if n < 15 or (n + 1) & n:
        raise SearchInputError(f"阈值实例要求 n = 2^k − 1 且 n ≥ 15，收到 {n}")
    quarter = n // 4
    cost = Tabulated(tuple(1 if x >= quarter else 0 for x in range(1, n)))
    half = -(-n // 2)
    sixth = -(-n // 6)
    third = -(-n // 3)

    def mirror(x: int) -> int:
        return n + 1 - x

    left = _node(sixth, _chain(1, sixth - 1), _node(third, _chain(sixth + 1, third - 1), _chain(third + 1, half - 1)))
    right = _node(
        mirror(sixth),
        _node(mirror(third), _chain(half + 1, mirror(third) - 1), _chain(mirror(third) + 1, mirror(sixth) - 1)),
        _chain(mirror(sixth) + 1, n),
    )
    return cost, _node(half, left, right)


def _gamma(lo: int, hi: int) -> Optional[SearchTree]:
    if lo > hi:
        return None
    length = hi - lo + 1
    if length <= 3:
        return _bisect(lo, hi)
    mid = (lo + hi) // 2
    step = max(1, round(GAMMA * length))
    left = right = None
    if mid - 1 >= lo:
        split = min(lo + step, mid - 1)
        left = _node(split, _bisect(lo, split - 1), _gamma(split + 1, mid - 1))
    if hi >= mid + 1:
        split = max(hi - step, mid + 1)
        right = _node(split, _gamma(mid + 1, split - 1), _bisect(split + 1, hi))
    return _node(mid, left, right)


def gamma_strategy(n: int) -> SearchTree:
    """
    连续 γ 策略的离散化：先查中点，再在目标一侧距外端约 γ·len 处切分，
    外段用二分查找，内段递归。
    """
    _check_size(n)
    if n < 2:
        raise SearchInputError("γ 策略要求 n ≥ 2")
    strategy = _gamma(1, n)
    assert strategy is not None
    return strategy


def solve_line_distributional(n: int, c: CostModel, d: TargetDistribution) -> SolveResult:
    """
    目标服从已知分布时最小化期望代价：
    E(L,R) = min_q [Σ_{t∈(L,R)} P(t)·g(q,t) + E(L,q) + E(q,R)]。
    """
    _check_size(n)
    if d.n != n:
        raise SearchInputError(f"分布长度 {d.n} 与 n={n} 不一致")
    report = validate(c, n)
    report.raise_for_violation()
    start = time.perf_counter()
    g = make_cost(c, path(n))

    weighted = np.empty((n + 1, n + 1), dtype=object)
    weighted[:, 0] = Fraction(0)
    weighted[0, :] = Fraction(0)
    for q in range(1, n + 1):
        for t in range(1, n + 1):
            weighted[q, t] = d.p(t) * g(q, t)
    prefix = np.cumsum(weighted, axis=1)

    best: Dict[Tuple[int, int], Fraction] = {}
    choice: Dict[Tuple[int, int], int] = {}
    for L in range(0, n + 1):
        best[(L, L + 1)] = Fraction(0)
    for size in range(1, n + 1):
        for L in range(0, n + 1 - size):
            R = L + size + 1
            top: Optional[Fraction] = None
            arg = L + 1
            for q in range(L + 1, R):
                total = prefix[q, R - 1] - prefix[q, L] + best[(L, q)] + best[(q, R)]
                if top is None or total < top:
                    top, arg = total, q
            best[(L, R)] = top  # type: ignore[assignment]
            choice[(L, R)] = arg

    def build(L: int, R: int) -> Optional[SearchTree]:
        if R - L <= 1:
            return None
        q = choice[(L, R)]
        return _node(q, build(L, q), build(q, R))

    with recursion_limit(solver_limits.recursion_limit):
        strategy = build(0, n + 1)
    assert strategy is not None
    stats = SolverStats(states_expanded=len(choice), wall_time_ms=int((time.perf_counter() - start) * 1000))
    value = Fraction(best[(0, n + 1)])
    logger.info("分布动态规划完成：n=%d，期望代价 %s，耗时 %dms", n, value, stats.wall_time_ms)
    return SolveResult(value=value, strategy=strategy, stats=stats)


def expected_cost(n: int, c: CostModel, d: TargetDistribution, s: SearchTree) -> Fraction:
    """策略在分布 d 下的期望代价。"""
    costs = target_costs(path(n), c, s)
    return sum((d.p(t) * costs[t] for t in range(1, n + 1)), Fraction(0))
