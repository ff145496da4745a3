"""
查询代价模型 g(q, t) 及其校验。

四种模型：对称多项式、非对称多项式对、双变量多项式对（只适用于路径）以及单调查表。
所有系数均为整数，求值全部使用 Python 整数，结果精确。正确查询（q == t）的代价恒为 0。
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, ClassVar, Dict, Iterable, List, Mapping, Optional, Tuple, Union

from .errors import SearchInputError, TopologyMismatchError
from .graph import Tree, distance

logger = logging.getLogger(__name__)

Coefficients = Tuple[int, ...]
BivariateTerms = Tuple[Tuple[Tuple[int, int], int], ...]


def _int_tuple(values: Iterable[object], label: str) -> Coefficients:
    result: List[int] = []
    for value in values:
        if isinstance(value, bool) or not isinstance(value, int):
            raise SearchInputError(f"{label} 的系数必须是整数，收到 {value!r}")
        result.append(value)
    if not result:
        raise SearchInputError(f"{label} 至少需要一个系数")
    return tuple(result)


def _poly(coeffs: Coefficients, x: int) -> int:
    total = 0
    for coef in reversed(coeffs):
        total = total * x + coef
    return total


@dataclass(frozen=True)
class SymmetricPoly:
    """h(x) = Σ β_m x^m，x 为查询点与目标的距离。"""

    coeffs: Coefficients
    kind: ClassVar[str] = "sym-poly"

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _int_tuple(self.coeffs, "sym-poly"))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def h(self, x: int) -> int:
        return _poly(self.coeffs, x)


@dataclass(frozen=True)
class AsymmetricPoly:
    """q < t 时代价 h−(t−q)，q > t 时代价 h+(q−t)；两侧系数补齐到同一次数。"""

    minus: Coefficients
    plus: Coefficients
    kind: ClassVar[str] = "asym-poly"

    def __post_init__(self) -> None:
        minus = _int_tuple(self.minus, "asym-poly minus")
        plus = _int_tuple(self.plus, "asym-poly plus")
        width = max(len(minus), len(plus))
        object.__setattr__(self, "minus", minus + (0,) * (width - len(minus)))
        object.__setattr__(self, "plus", plus + (0,) * (width - len(plus)))

    @property
    def degree(self) -> int:
        return len(self.minus) - 1

    def h_minus(self, x: int) -> int:
        return _poly(self.minus, x)

    def h_plus(self, x: int) -> int:
        return _poly(self.plus, x)


def _terms(raw: Union[Mapping[Tuple[int, int], int], Iterable[Tuple[Tuple[int, int], int]]], label: str) -> BivariateTerms:
    items = raw.items() if isinstance(raw, Mapping) else raw
    merged: Dict[Tuple[int, int], int] = {}
    for key, coef in items:
        i, j = int(key[0]), int(key[1])
        if i < 0 or j < 0:
            raise SearchInputError(f"{label} 的指数必须非负：{key!r}")
        if isinstance(coef, bool) or not isinstance(coef, int):
            raise SearchInputError(f"{label} 的系数必须是整数，收到 {coef!r}")
        merged[(i, j)] = merged.get((i, j), 0) + coef
    return tuple(sorted((key, coef) for key, coef in merged.items() if coef != 0))


@dataclass(frozen=True)
class BivariatePoly:
    """
    双变量多项式代价：q < t 时 Σ γ−_{i,j} q^i t^j，q > t 时 Σ γ+_{i,j} q^i t^j。

    bound_exponent (s) 与 bound_scale (C) 声明系数幅度上界 |γ| ≤ C·n^s。
    """

    minus: BivariateTerms
    plus: BivariateTerms
    bound_exponent: int = 1
    bound_scale: int = 1
    kind: ClassVar[str] = "bivar-poly"

    def __post_init__(self) -> None:
        object.__setattr__(self, "minus", _terms(self.minus, "bivar-poly minus"))
        object.__setattr__(self, "plus", _terms(self.plus, "bivar-poly plus"))
        if self.bound_exponent < 0 or self.bound_scale < 1:
            raise SearchInputError("系数上界参数必须满足 s ≥ 0 且 C ≥ 1")

    @property
    def degree(self) -> int:
        exponents = [i + j for (i, j), _ in self.minus + self.plus]
        return max(exponents, default=0)

    def side_terms(self, side: str) -> BivariateTerms:
        return self.minus if side == "minus" else self.plus

    def value(self, q: int, t: int) -> int:
        if q == t:
            return 0
        terms = self.minus if q < t else self.plus
        return sum(coef * q**i * t**j for (i, j), coef in terms)


@dataclass(frozen=True)
class Tabulated:
    """显式单调表 h(1..n−1)，对称距离代价。"""

    values: Coefficients
    kind: ClassVar[str] = "table"

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _int_tuple(self.values, "table"))

    def h(self, x: int) -> int:
        if x < 1 or x > len(self.values):
            raise SearchInputError(f"代价表未覆盖距离 {x}（表长 {len(self.values)}）")
        return self.values[x - 1]


CostModel = Union[SymmetricPoly, AsymmetricPoly, BivariatePoly, Tabulated]
DISTANCE_MODELS = (SymmetricPoly, Tabulated)
LINE_ONLY_MODELS = (AsymmetricPoly, BivariatePoly)


@dataclass(frozen=True)
class TargetDistribution:
    """目标在 1..n 上的已知分布（有理数概率）。"""

    probabilities: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        probs = tuple(Fraction(p) for p in self.probabilities)
        if not probs:
            raise SearchInputError("分布至少包含一个顶点")
        if any(p < 0 for p in probs):
            raise SearchInputError("概率必须非负")
        if sum(probs) != 1:
            raise SearchInputError(f"概率之和必须为 1，实际为 {sum(probs)}")
        object.__setattr__(self, "probabilities", probs)

    @property
    def n(self) -> int:
        return len(self.probabilities)

    def p(self, t: int) -> Fraction:
        return self.probabilities[t - 1]

    @classmethod
    def uniform(cls, n: int) -> "TargetDistribution":
        return cls(tuple(Fraction(1, n) for _ in range(n)))

    @classmethod
    def point_mass(cls, n: int, v: int) -> "TargetDistribution":
        if not 1 <= v <= n:
            raise SearchInputError(f"非法顶点 {v}")
        return cls(tuple(Fraction(int(t == v)) for t in range(1, n + 1)))


def make_cost(c: CostModel, tree: Tree) -> Callable[[int, int], int]:
    """为给定树绑定代价函数 g(q, t)，不做顶点校验，供求解器内循环使用。"""
    if isinstance(c, LINE_ONLY_MODELS) and not tree.is_line:
        raise TopologyMismatchError(f"{c.kind} 代价模型只能用于路径 1..n")
    if isinstance(c, AsymmetricPoly):
        def asymmetric(q: int, t: int) -> int:
            if q == t:
                return 0
            return c.h_minus(t - q) if q < t else c.h_plus(q - t)

        return asymmetric
    if isinstance(c, BivariatePoly):
        return c.value
    if tree.is_line:
        def on_line(q: int, t: int) -> int:
            return 0 if q == t else c.h(abs(q - t))

        return on_line

    def on_tree(q: int, t: int) -> int:
        return 0 if q == t else c.h(tree.distances_from(q)[t])

    return on_tree


def eval_cost(c: CostModel, tree: Tree, q: int, t: int) -> int:
    tree.check_vertex(q)
    tree.check_vertex(t)
    if q == t:
        return 0
    if isinstance(c, LINE_ONLY_MODELS) and not tree.is_line:
        raise TopologyMismatchError(f"{c.kind} 代价模型只能用于路径 1..n")
    if isinstance(c, AsymmetricPoly):
        return c.h_minus(t - q) if q < t else c.h_plus(q - t)
    if isinstance(c, BivariatePoly):
        return c.value(q, t)
    return c.h(distance(tree, q, t))


def distance_function(c: CostModel) -> Callable[[int], int]:
    """对称距离代价的 h(x)；非对称模型抛出输入错误。"""
    if not isinstance(c, DISTANCE_MODELS):
        raise SearchInputError(f"需要对称距离代价（sym-poly 或 table），收到 {c.kind}")
    return c.h


@dataclass
class ValidationReport:
    ok: bool = True
    reason: Optional[str] = None
    witness: Optional[Tuple[int, ...]] = None
    warnings: List[str] = field(default_factory=list)

    def fail(self, reason: str, witness: Tuple[int, ...]) -> "ValidationReport":
        self.ok = False
        self.reason = reason
        self.witness = witness
        return self

    def raise_for_violation(self) -> None:
        if not self.ok:
            raise SearchInputError(f"{self.reason}（见证点 {self.witness}）")


def _check_monotone(h: Callable[[int], int], n: int, label: str, report: ValidationReport) -> bool:
    previous = None
    for x in range(1, n):
        value = h(x)
        if value < 0:
            report.fail(f"{label} 在 x={x} 处为负", (x,))
            return False
        if previous is not None and value < previous:
            report.fail(f"{label} 在 x={x} 处不单调", (x,))
            return False
        previous = value
    return True


def validate(c: CostModel, n: int) -> ValidationReport:
    """在有限定义域 {1..n} 上直接求值检查模型的全部不变量。"""
    report = ValidationReport()
    if isinstance(c, Tabulated):
        if len(c.values) < n - 1:
            return report.fail(f"代价表长度 {len(c.values)} 不足 n−1={n - 1}", (len(c.values) + 1,))
        _check_monotone(c.h, n, "h", report)
    elif isinstance(c, SymmetricPoly):
        _check_monotone(c.h, n, "h", report)
    elif isinstance(c, AsymmetricPoly):
        if _check_monotone(c.h_minus, n, "h−", report):
            _check_monotone(c.h_plus, n, "h+", report)
    elif isinstance(c, BivariatePoly):
        _validate_bivariate(c, n, report)
        for warning in report.warnings:
            logger.warning("双变量代价未满足单调性：%s", warning)
    else:
        raise SearchInputError(f"未知代价模型：{c!r}")
    return report


def _validate_bivariate(c: BivariatePoly, n: int, report: ValidationReport) -> None:
    limit = c.bound_scale * n**c.bound_exponent
    for (i, j), coef in c.minus + c.plus:
        if abs(coef) > limit:
            report.fail(f"系数 γ_{{{i},{j}}}={coef} 超出上界 {limit}", (i, j))
            return
    for t in range(1, n + 1):
        for q in range(1, n + 1):
            if q != t and c.value(q, t) < 0:
                report.fail(f"g({q},{t}) 为负", (q, t))
                return
    for t in range(1, n + 1):
        # 固定 t 时，两侧代价都应随 |q−t| 增大而不减
        for q in range(1, t - 1):
            if c.value(q, t) < c.value(q + 1, t):
                report.warnings.append(f"g(q,{t}) 在 q={q} 处随距离减小")
                return
        for q in range(t + 2, n + 1):
            if c.value(q, t) < c.value(q - 1, t):
                report.warnings.append(f"g(q,{t}) 在 q={q} 处随距离减小")
                return


def pricing() -> BivariatePoly:
    """定价遗憾：报价过高（q > t）损失 t，过低损失 t − q。"""
    return BivariatePoly(minus={(0, 1): 1, (1, 0): -1}, plus={(0, 1): 1}, bound_exponent=1)


def severe_congestion() -> BivariatePoly:
    return pricing()


def benign_congestion(a: int, b: int) -> BivariatePoly:
    """温和拥塞：过高代价 (A/B)(q−t)，过低 t−q；整体乘以 B 保持整数系数，以双变量形式给出。"""
    if a < 0 or b < 1:
        raise SearchInputError("benign 预设要求 A ≥ 0、B ≥ 1")
    return bivariate_from_asymmetric(AsymmetricPoly(minus=(0, b), plus=(0, a)))


def bivariate_from_asymmetric(c: Union[SymmetricPoly, AsymmetricPoly]) -> BivariatePoly:
    """把 h±(|q−t|) 展开成 q^i t^j 的系数。"""
    minus_coeffs = c.coeffs if isinstance(c, SymmetricPoly) else c.minus
    plus_coeffs = c.coeffs if isinstance(c, SymmetricPoly) else c.plus
    minus: Dict[Tuple[int, int], int] = {}
    plus: Dict[Tuple[int, int], int] = {}
    for m, beta in enumerate(minus_coeffs):
        # (t − q)^m
        for j in range(m + 1):
            key = (m - j, j)
            minus[key] = minus.get(key, 0) + beta * comb(m, j) * (-1) ** (m - j)
    for m, beta in enumerate(plus_coeffs):
        # (q − t)^m
        for i in range(m + 1):
            key = (i, m - i)
            plus[key] = plus.get(key, 0) + beta * comb(m, i) * (-1) ** (m - i)
    scale = max([abs(v) for v in list(minus.values()) + list(plus.values())] + [1])
    return BivariatePoly(minus=minus, plus=plus, bound_exponent=0, bound_scale=scale)


PRESETS: Dict[str, Callable[[], CostModel]] = {
    "pricing": pricing,
    "severe": severe_congestion,
    "linear": lambda: SymmetricPoly((0, 1)),
    "quadratic": lambda: SymmetricPoly((0, 0, 1)),
    "constant": lambda: SymmetricPoly((1,)),
}
