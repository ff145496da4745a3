"""
自顶向下的极小极大记忆化搜索骨架。

搜索者在候选查询中取最小，对手在“命中”与各个剩余分量中取最大。子类只需描述状态：
规范化键与常数偏移、候选查询顺序、命中代价和子状态。值表存的是去掉偏移后的约化值，
因此偏移不同但约化形式相同的状态可以共享一条记录。
"""

from __future__ import annotations

import abc
import logging
import sys
from contextlib import contextmanager
from dataclasses import asdict, dataclass
from typing import Generic, Hashable, Iterator, List, Optional, Sequence, Tuple, TypeVar

from infra.memo import MemoTable

from .errors import SizeLimitError
from .strategy import SearchTree

logger = logging.getLogger(__name__)

State = TypeVar("State")


@dataclass
class SolverStats:
    states_expanded: int = 0
    memo_hits: int = 0
    pruned: int = 0
    wall_time_ms: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


@contextmanager
def recursion_limit(limit: int) -> Iterator[None]:
    previous = sys.getrecursionlimit()
    if limit > previous:
        sys.setrecursionlimit(limit)
    try:
        yield
    finally:
        sys.setrecursionlimit(previous)


def _loses(value: int, q: int, best: int, best_q: int) -> bool:
    # 代价更高，或者代价相同但编号更大
    return value > best or (value == best and q > best_q)


class MinimaxProgram(abc.ABC, Generic[State]):
    """带分支定界剪枝的记忆化极小极大求值器。"""

    name = "minimax"

    def __init__(self, max_states: int) -> None:
        self.max_states = max_states
        self.values = MemoTable(f"{self.name}-value")
        self.choices = MemoTable(f"{self.name}-choice")
        self.stats = SolverStats()

    @abc.abstractmethod
    def encode(self, state: State) -> Tuple[Hashable, int]:
        """返回 (规范化键, 偏移)；状态真实值 = 偏移 + 约化值。"""

    @abc.abstractmethod
    def candidates(self, state: State) -> Sequence[int]:
        """候选查询，按评估顺序排列（顺序只影响剪枝效率）。"""

    @abc.abstractmethod
    def hit_cost(self, state: State, q: int) -> int:
        """目标恰为 q 时历史查询的总代价。"""

    @abc.abstractmethod
    def children(self, state: State, q: int) -> List[State]:
        """查询 q 后各个非空剩余分量对应的子状态。"""

    def lower_bound(self, state: State) -> int:
        """子状态值的可采纳下界；默认不提供。"""
        return 0

    def encode_choice(self, state: State, q: int) -> Hashable:
        return q

    def decode_choice(self, state: State, stored: Hashable) -> int:
        return int(stored)  # type: ignore[arg-type]

    def value(self, state: State) -> int:
        key, base = self.encode(state)
        cached = self.values.get(key)
        if cached is not None:
            self.stats.memo_hits += 1
            return base + cached
        self.stats.states_expanded += 1
        if self.stats.states_expanded > self.max_states:
            logger.warning("%s 状态数超过上限 %d，已剪枝 %d 次", self.name, self.max_states, self.stats.pruned)
            raise SizeLimitError(f"{self.name} 状态数超过上限 {self.max_states}")

        best: Optional[int] = None
        best_q: Optional[int] = None
        for q in self.candidates(state):
            hit = self.hit_cost(state, q)
            if best is not None and _loses(hit, q, best, best_q):
                self.stats.pruned += 1
                continue
            kids = self.children(state, q)
            if best is not None and kids:
                bound = max(self.lower_bound(kid) for kid in kids)
                if _loses(bound, q, best, best_q):
                    self.stats.pruned += 1
                    continue
            worst = hit
            cut = False
            for kid in kids:
                worst = max(worst, self.value(kid))
                if best is not None and _loses(worst, q, best, best_q):
                    cut = True
                    break
            if cut:
                self.stats.pruned += 1
                continue
            best, best_q = worst, q

        if best is None or best_q is None:
            raise RuntimeError(f"{self.name} 状态没有可行查询")
        self.values.put(key, best - base)
        self.choices.put(key, self.encode_choice(state, best_q))
        return best

    def choice(self, state: State) -> int:
        key, _ = self.encode(state)
        stored = self.choices.peek(key)
        if stored is None:
            self.value(state)
            stored = self.choices.peek(key)
        return self.decode_choice(state, stored)

    def extract(self, root: State) -> SearchTree:
        """按记录的最优查询回放出 STT。"""
        records: List[Tuple[int, List[int]]] = []
        stack: List[Tuple[State, Optional[int]]] = [(root, None)]
        while stack:
            state, parent = stack.pop()
            q = self.choice(state)
            index = len(records)
            records.append((q, []))
            if parent is not None:
                records[parent][1].append(index)
            for kid in self.children(state, q):
                stack.append((kid, index))
        built = {}
        for index in reversed(range(len(records))):
            q, kids = records[index]
            built[index] = SearchTree(q, tuple(built[k] for k in kids))
        return built[0]
