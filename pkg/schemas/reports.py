"""命令行输出的 JSON 报告结构，统一带 schema_version。"""

from __future__ import annotations

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from .strategy import StrategyNode

SCHEMA_VERSION = 1


class SolverStatsModel(BaseModel):
    states_expanded: int = 0
    memo_hits: int = 0
    pruned: int = 0
    wall_time_ms: int = 0


class SolveReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    command: str
    n: int
    cost: str
    value: str = Field(..., description="精确值；期望值以分数字符串表示")
    k: Optional[int] = None
    guarantee: Optional[str] = None
    oracle_value: Optional[str] = None
    stats: Optional[SolverStatsModel] = None
    strategy: Optional[StrategyNode] = None


class EvalReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    n: int
    cost: str
    worst_case_cost: int
    argmax_target: int
    is_kcut: Dict[str, bool] = Field(default_factory=dict)


class BoundsReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    n: int
    cost: str
    lower_bounds: List[int]
    bs_cost: int
    bs_upper_bound: int


class ConvertReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    k: int
    before_cost: int
    after_cost: int
    max_inflation: str
    guarantee: str
    strategy: StrategyNode


class SimulateReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    adversary: str
    transcript: Dict[str, Any]
