"""
实例与结果文件的读写工具。

树、代价模型、目标分布与策略都以 JSON 保存，结构由 schemas 中的 pydantic 模型定义；
策略另外可以导出为 Graphviz DOT。命令行中的代价模型可用简写，如 sym:0,1、
asym:0,1/0,2、table:1,1,2、preset:pricing、preset:benign:1,2，也可以直接给出文件路径。
"""

from __future__ import annotations

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Union

from pydantic import BaseModel, TypeAdapter, ValidationError

from engine.costs import (
    PRESETS,
    AsymmetricPoly,
    BivariatePoly,
    CostModel,
    SymmetricPoly,
    Tabulated,
    TargetDistribution,
    benign_congestion,
)
from engine.errors import SearchInputError
from engine.graph import Tree
from engine.strategy import SearchTree, from_json, to_dot, to_json
from schemas.documents import (
    AsymPolyDocument,
    BivariateTerm,
    BivarPolyDocument,
    CostDocument,
    DistributionDocument,
    SymPolyDocument,
    TableDocument,
    TreeDocument,
)

logger = logging.getLogger(__name__)

_COST_ADAPTER: TypeAdapter = TypeAdapter(CostDocument)

PathLike = Union[str, Path]


def _read_json(path: PathLike, label: str) -> object:
    file = Path(path)
    if not file.exists():
        raise SearchInputError(f"{label}文件不存在：{file}")
    try:
        return json.loads(file.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SearchInputError(f"{label}文件 {file} 第 {exc.lineno} 行第 {exc.colno} 列解析失败：{exc.msg}") from exc


def _validation_message(exc: ValidationError) -> str:
    first = exc.errors()[0]
    location = ".".join(str(part) for part in first.get("loc", ()))
    return f"{location or '<root>'}：{first.get('msg')}"


def _write_text(path: PathLike, text: str) -> Path:
    file = Path(path)
    file.parent.mkdir(parents=True, exist_ok=True)
    file.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    return file


def load_tree(path: PathLike) -> Tree:
    raw = _read_json(path, "树")
    try:
        document = TreeDocument.model_validate(raw)
    except ValidationError as exc:
        raise SearchInputError(f"树文件 {path} 不合法，{_validation_message(exc)}") from exc
    return Tree.from_edges(document.n, document.edges)


def save_tree(t: Tree, path: PathLike) -> Path:
    document = TreeDocument(n=t.n, edges=list(t.edges))
    return _write_text(path, json.dumps(document.model_dump(), ensure_ascii=False, indent=2))


def cost_from_document(document: BaseModel) -> CostModel:
    if isinstance(document, SymPolyDocument):
        return SymmetricPoly(tuple(document.coefficients))
    if isinstance(document, AsymPolyDocument):
        return AsymmetricPoly(tuple(document.minus), tuple(document.plus))
    if isinstance(document, BivarPolyDocument):
        return BivariatePoly(
            minus=[((term.i, term.j), term.coefficient) for term in document.minus],
            plus=[((term.i, term.j), term.coefficient) for term in document.plus],
            bound_exponent=document.bound_exponent,
            bound_scale=document.bound_scale,
        )
    if isinstance(document, TableDocument):
        return Tabulated(tuple(document.values))
    raise SearchInputError(f"未知代价文档类型：{type(document).__name__}")


def cost_to_document(c: CostModel) -> BaseModel:
    if isinstance(c, SymmetricPoly):
        return SymPolyDocument(coefficients=list(c.coeffs))
    if isinstance(c, AsymmetricPoly):
        return AsymPolyDocument(minus=list(c.minus), plus=list(c.plus))
    if isinstance(c, BivariatePoly):
        return BivarPolyDocument(
            minus=[BivariateTerm(i=i, j=j, coefficient=coef) for (i, j), coef in c.minus],
            plus=[BivariateTerm(i=i, j=j, coefficient=coef) for (i, j), coef in c.plus],
            bound_exponent=c.bound_exponent,
            bound_scale=c.bound_scale,
        )
    return TableDocument(values=list(c.values))


def load_cost(path: PathLike) -> CostModel:
    """读取代价文件；既接受裸文档，也接受外层带 "cost" 字段的文档。"""
    raw = _read_json(path, "代价")
    if isinstance(raw, dict) and "cost" in raw and "kind" not in raw:
        raw = raw["cost"]
    try:
        document = _COST_ADAPTER.validate_python(raw)
    except ValidationError as exc:
        raise SearchInputError(f"代价文件 {path} 不合法，{_validation_message(exc)}") from exc
    return cost_from_document(document)


def save_cost(c: CostModel, path: PathLike) -> Path:
    return _write_text(path, json.dumps(cost_to_document(c).model_dump(), ensure_ascii=False, indent=2))


def _int_list(text: str, label: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise SearchInputError(f"{label} 需要逗号分隔的整数，收到 {text!r}") from exc


def parse_cost_spec(spec: str) -> CostModel:
    """解析命令行中的代价模型简写。"""
    spec = spec.strip()
    kind, _, body = spec.partition(":")
    if kind == "sym" and body:
        return SymmetricPoly(tuple(_int_list(body, "sym")))
    if kind == "asym" and body:
        minus, sep, plus = body.partition("/")
        if not sep:
            raise SearchInputError("asym 简写格式为 asym:β−_0,…/β+_0,…")
        return AsymmetricPoly(tuple(_int_list(minus, "asym minus")), tuple(_int_list(plus, "asym plus")))
    if kind == "table" and body:
        return Tabulated(tuple(_int_list(body, "table")))
    if kind == "preset" and body:
        name, _, args = body.partition(":")
        if name == "benign":
            values = _int_list(args, "benign")
            if len(values) != 2:
                raise SearchInputError("benign 预设格式为 preset:benign:A,B")
            return benign_congestion(values[0], values[1])
        factory = PRESETS.get(name)
        if factory is None:
            raise SearchInputError(f"未知预设 {name!r}，可选：{', '.join(sorted(PRESETS))}, benign:A,B")
        return factory()
    if Path(spec).suffix == ".json":
        return load_cost(spec)
    raise SearchInputError(f"无法识别的代价模型 {spec!r}")


def distribution_from_document(document: DistributionDocument) -> TargetDistribution:
    try:
        probabilities = tuple(Fraction(value) for value in document.probabilities)
    except (ValueError, ZeroDivisionError) as exc:
        raise SearchInputError(f"概率无法解析为有理数：{exc}") from exc
    return TargetDistribution(probabilities)


def load_distribution(spec: str, n: int) -> TargetDistribution:
    """"uniform" 或分布 JSON 文件路径。"""
    if spec == "uniform":
        return TargetDistribution.uniform(n)
    raw = _read_json(spec, "分布")
    try:
        document = DistributionDocument.model_validate(raw)
    except ValidationError as exc:
        raise SearchInputError(f"分布文件 {spec} 不合法，{_validation_message(exc)}") from exc
    distribution = distribution_from_document(document)
    if distribution.n != n:
        raise SearchInputError(f"分布长度 {distribution.n} 与 n={n} 不一致")
    return distribution


def save_distribution(d: TargetDistribution, path: PathLike) -> Path:
    document = DistributionDocument(probabilities=[str(p) for p in d.probabilities])
    return _write_text(path, json.dumps(document.model_dump(exclude_none=True), ensure_ascii=False, indent=2))


def load_strategy(path: PathLike, tree: Optional[Tree] = None) -> SearchTree:
    file = Path(path)
    if not file.exists():
        raise SearchInputError(f"策略文件不存在：{file}")
    return from_json(file.read_text(encoding="utf-8"), tree)


def save_strategy(s: SearchTree, path: PathLike) -> Path:
    """按后缀选择格式：.dot 写 Graphviz，其余写 JSON。"""
    file = Path(path)
    text = to_dot(s) if file.suffix == ".dot" else to_json(s)
    logger.debug("写出策略 %s（%d 个节点）", file, s.size)
    return _write_text(file, text)


def write_report(report: BaseModel, path: PathLike) -> Path:
    return _write_text(path, json.dumps(report.model_dump(mode="json"), ensure_ascii=False, indent=2))
