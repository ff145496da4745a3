"""求解结果的文本化渲染工具。"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence

from .minimax import SolverStats
from .strategy import Transcript


def render_solve(
    title: str,
    n: int,
    cost: str,
    value: object,
    stats: Optional[SolverStats] = None,
    k: Optional[int] = None,
    guarantee: object = None,
    oracle_value: object = None,
) -> str:
    """将一次求解输出为简洁的中文描述。"""
    lines: List[str] = []
    lines.append(f"【{title}】n={n}，代价模型 {cost}")
    lines.append(f"最优值：{value}")
    if k is not None:
        note = f"，近似保证 {guarantee}" if guarantee is not None else ""
        lines.append(f"k-cut 参数：k={k}{note}")
    if oracle_value is not None:
        lines.append(f"暴力基准：{oracle_value}")
    if stats is not None:
        lines.append("【统计】")
        lines.append(
            f"- 状态 {stats.states_expanded}，记忆命中 {stats.memo_hits}，剪枝 {stats.pruned}，耗时 {stats.wall_time_ms}ms"
        )
    return "\n".join(lines)


def render_eval(n: int, cost: str, worst: int, argmax: int, kcut: Dict[int, bool]) -> str:
    lines = [f"【策略评估】n={n}，代价模型 {cost}", f"最坏情况代价：{worst}（目标 {argmax}）"]
    if kcut:
        lines.append("【k-cut 检查】")
        for k in sorted(kcut):
            lines.append(f"- k={k}：{'是' if kcut[k] else '否'}")
    return "\n".join(lines)


def render_bounds(n: int, cost: str, lower: Sequence[int], bs_cost: int, bs_bound: int) -> str:
    lines = [f"【上下界】n={n}，代价模型 {cost}"]
    for index, bound in enumerate(lower, start=1):
        lines.append(f"- 下界 {index}：{bound}")
    lines.append(f"二分查找实际代价：{bs_cost}，上界：{bs_bound}")
    return "\n".join(lines)


def render_convert(k: int, before: int, after: int, inflation: object, guarantee: object) -> str:
    return "\n".join(
        [
            f"【k-cut 转换】k={k}",
            f"转换前最坏代价：{before}，转换后：{after}",
            f"单目标最大膨胀：{inflation}（保证 ≤ {guarantee}）",
        ]
    )


def render_simulate(adversary: str, transcript: Transcript) -> str:
    lines = [f"【模拟】对手 {adversary}"]
    for q, response in zip(transcript.queries, transcript.responses):
        answer = "命中" if response == "hit" else f"朝 {response}"
        lines.append(f"- 查询 {q}：{answer}")
    lines.append(f"目标 {transcript.target}，总代价 {transcript.total_cost}")
    return "\n".join(lines)
