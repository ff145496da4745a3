from __future__ import annotations

from typing import List

from pydantic import BaseModel, Field


class StrategyNode(BaseModel):
    query: int = Field(..., ge=1, description="本节点查询的顶点（1 起编号）")
    children: List["StrategyNode"] = Field(default_factory=list, description="按根标签升序排列的子策略")


StrategyNode.model_rebuild()
