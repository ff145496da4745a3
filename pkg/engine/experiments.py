"""常数估计与下界实例实验，结果以 DataFrame 返回，由 CLI 写成 CSV。"""

from __future__ import annotations

import logging
import time
from typing import Iterable, List, Optional, Union

import pandas as pd

from infra.settings import SolverLimits

from .costs import AsymmetricPoly, SymmetricPoly
from .graph import path
from .line_solver import binary_search_strategy, gamma_strategy, solve_line_poly, threshold_instance
from .strategy import worst_case_cost

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["n", "opt", "bs", "ratio", "opt_over_n", "runtime_ms"]
LOWERBOUND_COLUMNS = ["experiment", "n", "strategy_cost", "bs_cost", "ratio"]


def _ratio(numerator: int, denominator: int) -> float:
    if denominator == 0:
        return float("inf") if numerator else 1.0
    return numerator / denominator


def constant_sweep(
    cost: Union[SymmetricPoly, AsymmetricPoly],
    n_list: Iterable[int],
    limits: Optional[SolverLimits] = None,
    stable: bool = False,
) -> pd.DataFrame:
    """逐个 n 求 OPT(n)，并与二分查找对比；stable=True 时 runtime_ms 记为 0。"""
    rows: List[dict] = []
    for n in n_list:
        start = time.perf_counter()
        result = solve_line_poly(n, cost, limits)
        elapsed = int((time.perf_counter() - start) * 1000)
        bs, _ = worst_case_cost(path(n), cost, binary_search_strategy(n))
        rows.append(
            {
                "n": n,
                "opt": result.value,
                "bs": bs,
                "ratio": _ratio(bs, result.value),
                "opt_over_n": result.value / n,
                "runtime_ms": 0 if stable else elapsed,
            }
        )
        logger.info("常数估计：n=%d，OPT=%d，OPT/n=%.4f", n, result.value, result.value / n)
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def lowerbound_experiment(threshold_ns: Iterable[int], gamma_ns: Iterable[int]) -> pd.DataFrame:
    rows: List[dict] = []
    for n in threshold_ns:
        cost, strategy = threshold_instance(n)
        tree = path(n)
        own, _ = worst_case_cost(tree, cost, strategy)
        bs, _ = worst_case_cost(tree, cost, binary_search_strategy(n))
        rows.append({"experiment": "threshold", "n": n, "strategy_cost": own, "bs_cost": bs, "ratio": _ratio(bs, own)})

    linear = SymmetricPoly((0, 1))
    for n in gamma_ns:
        tree = path(n)
        own, _ = worst_case_cost(tree, linear, gamma_strategy(n))
        bs, _ = worst_case_cost(tree, linear, binary_search_strategy(n))
        rows.append({"experiment": "gamma", "n": n, "strategy_cost": own, "bs_cost": bs, "ratio": _ratio(bs, own)})
        logger.info("γ 策略：n=%d，γ=%d，BS=%d，比值 %.4f", n, own, bs, _ratio(bs, own))
    return pd.DataFrame(rows, columns=LOWERBOUND_COLUMNS)
