"""实例文件（树、代价模型、目标分布）的 JSON 文档结构。"""

from __future__ import annotations

from typing import Annotated, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, model_validator


class TreeDocument(BaseModel):
    n: int = Field(..., ge=1, description="顶点数")
    edges: List[Tuple[int, int]] = Field(default_factory=list, description="1 起编号的无向边列表")


class SymPolyDocument(BaseModel):
    kind: Literal["sym-poly"] = "sym-poly"
    coefficients: List[int] = Field(..., min_length=1, description="β_0..β_p")


class AsymPolyDocument(BaseModel):
    kind: Literal["asym-poly"] = "asym-poly"
    minus: List[int] = Field(..., min_length=1, description="q < t 一侧的 β−_0..β−_p")
    plus: List[int] = Field(..., min_length=1, description="q > t 一侧的 β+_0..β+_p")


class BivariateTerm(BaseModel):
    i: int = Field(..., ge=0, description="q 的指数")
    j: int = Field(..., ge=0, description="t 的指数")
    coefficient: int


class BivarPolyDocument(BaseModel):
    kind: Literal["bivar-poly"] = "bivar-poly"
    minus: List[BivariateTerm] = Field(default_factory=list, description="q < t 时的 γ−_{i,j}")
    plus: List[BivariateTerm] = Field(default_factory=list, description="q > t 时的 γ+_{i,j}")
    bound_exponent: int = Field(1, ge=0, description="系数上界指数 s")
    bound_scale: int = Field(1, ge=1, description="系数上界常数 C")


class TableDocument(BaseModel):
    kind: Literal["table"] = "table"
    values: List[int] = Field(..., min_length=1, description="h(1..n−1)")


CostDocument = Annotated[
    Union[SymPolyDocument, AsymPolyDocument, BivarPolyDocument, TableDocument],
    Field(discriminator="kind"),
]


class CostFile(BaseModel):
    cost: CostDocument


class DistributionDocument(BaseModel):
    probabilities: List[str] = Field(..., min_length=1, description="有理数概率，如 \"1/3\"")
    weights: Optional[List[int]] = Field(None, description="可选：非负整数权重，按总和归一化")

    @model_validator(mode="before")
    @classmethod
    def _accept_weights(cls, data: object) -> object:
        if isinstance(data, dict) and "probabilities" not in data and "weights" in data:
            weights = data["weights"]
            total = sum(weights) if weights else 0
            if total <= 0:
                raise ValueError("weights 之和必须为正")
            data = {**data, "probabilities": [f"{w}/{total}" for w in weights]}
        return data
