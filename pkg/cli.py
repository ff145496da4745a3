"""costsearch 命令行入口：求解、暴力校验、评估、转换与实验。"""

from __future__ import annotations

import argparse
import logging
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

import env  # noqa: F401

import pandas as pd
from pydantic import BaseModel, Field, ValidationError, model_validator

from datahub.formats import load_distribution, load_strategy, load_tree, parse_cost_spec, save_strategy, write_report
from datahub.instances import random_tree
from engine.costs import BivariatePoly, CostModel, Tabulated, bivariate_from_asymmetric
from engine.errors import SearchInputError, SizeLimitError
from engine.experiments import constant_sweep, lowerbound_experiment
from engine.graph import Tree, path
from engine.line_solver import (
    binary_search_strategy,
    bs_cost_upper_bound,
    opt_lower_bounds,
    solve_line_bivariate,
    solve_line_distributional,
    solve_line_poly,
)
from engine.minimax import SolverStats
from engine.oracle import OracleResult, brute_force_expected_line, brute_force_line, brute_force_tree
from engine.report import render_bounds, render_convert, render_eval, render_simulate, render_solve
from engine.strategy import (
    FixedTarget,
    LargerSide,
    SearchTree,
    convert_to_kcut,
    is_kcut,
    max_inflation,
    simulate,
    to_dict,
    worst_case_cost,
)
from engine.tree_solver import k_for_epsilon, kcut_guarantee, solve_tree_kcut
from infra.settings import SolverLimits, solver_limits
from schemas.reports import (
    BoundsReport,
    ConvertReport,
    EvalReport,
    SimulateReport,
    SolveReport,
    SolverStatsModel,
)
from schemas.strategy import StrategyNode

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_LIMIT = 3

INSTANCE_COMMANDS = {"solve-line", "solve-tree", "oracle", "eval", "convert-kcut", "simulate", "bounds"}


class RunConfig(BaseModel):
    command: str = Field(..., description="子命令")
    n: Optional[int] = Field(None, ge=1, description="路径 1..n 的规模")
    tree: Optional[Path] = Field(None, description="树的 JSON 文件")
    random_tree: Optional[int] = Field(None, ge=1, description="随机树的规模，配合 seed 使用")
    seed: int = Field(0, description="随机实例种子")
    cost: str = Field("sym:0,1", description="代价模型简写或文件路径")
    k: Optional[int] = Field(None, description="k-cut 参数")
    epsilon: Optional[float] = Field(None, description="近似参数，给出时 k = max(3, ⌈2/ε⌉)")
    distribution: Optional[str] = Field(None, description="uniform 或分布 JSON 文件")
    strategy: Optional[Path] = None
    emit_strategy: Optional[Path] = None
    json_path: Optional[Path] = None
    csv_path: Optional[Path] = None
    n_list: List[int] = Field(default_factory=lambda: [32, 64, 128])
    threshold_ns: List[int] = Field(default_factory=lambda: [15, 31, 63])
    gamma_ns: List[int] = Field(default_factory=lambda: [4096])
    check_k: List[int] = Field(default_factory=list)
    adversary: str = "larger-side"
    target: Optional[int] = None
    as_bivariate: bool = False
    oracle_check: bool = False
    stats: bool = False
    stable: bool = False
    max_states: Optional[int] = Field(None, ge=1)
    oracle_limit: Optional[int] = Field(None, ge=1)

    @model_validator(mode="after")
    def _check(self) -> "RunConfig":
        if self.epsilon is not None:
            if self.epsilon <= 0:
                raise ValueError("epsilon 必须为正")
            self.k = k_for_epsilon(self.epsilon)
        sources = sum(value is not None for value in (self.n, self.tree, self.random_tree))
        if self.command in INSTANCE_COMMANDS and sources != 1:
            raise ValueError("必须且只能给出一个实例来源：--n、--tree 或 --random-tree")
        if self.command == "bounds" and self.n is None:
            raise ValueError("bounds 只接受 --n")
        return self

    def limits(self) -> SolverLimits:
        return solver_limits.with_overrides(
            line_max_states=self.max_states,
            tree_max_states=self.max_states,
            oracle_line_max_n=self.oracle_limit,
            oracle_tree_max_n=self.oracle_limit,
            oracle_expected_max_n=self.oracle_limit,
        )


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"需要逗号分隔的整数：{text!r}") from exc


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--verbose", action="store_true", help="输出 DEBUG 日志")
    parser.add_argument("--quiet", action="store_true", help="只输出警告与错误")
    parser.add_argument("--json", dest="json_path", type=Path, help="把结构化结果写到 JSON 文件")
    parser.add_argument("--max-states", type=int, help="本次运行的状态数上限")
    parser.add_argument("--oracle-limit", type=int, help="本次运行的暴力预言机规模上限")


def _add_instance(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, help="路径 1..n")
    parser.add_argument("--tree", type=Path, help="树的 JSON 文件")
    parser.add_argument("--random-tree", type=int, help="随机树规模（Prüfer 序列）")
    parser.add_argument("--seed", type=int, default=0, help="随机种子，默认 0")
    parser.add_argument("--cost", default="sym:0,1", help="代价模型，例如 sym:0,1 或 preset:pricing")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="costsearch", description="距离相关查询代价下的对抗目标搜索求解器。")
    commands = parser.add_subparsers(dest="command", required=True)

    solve_line = commands.add_parser("solve-line", help="路径上的精确动态规划")
    _add_common(solve_line)
    _add_instance(solve_line)
    solve_line.add_argument("--distribution", help="uniform 或分布文件；给出时最小化期望代价")
    solve_line.add_argument("--as-bivariate", action="store_true", help="先把距离代价展开为双变量多项式")
    solve_line.add_argument("--emit-strategy", type=Path, help="按后缀写出策略（.json / .dot）")
    solve_line.add_argument("--stats", action="store_true", help="打印求解统计")
    solve_line.add_argument("--oracle-check", action="store_true", help="同时运行暴力预言机")

    solve_tree = commands.add_parser("solve-tree", help="树上的 k-cut 近似动态规划")
    _add_common(solve_tree)
    _add_instance(solve_tree)
    solve_tree.add_argument("--k", type=int, default=3)
    solve_tree.add_argument("--epsilon", type=float, help="给出时 k = max(3, ⌈2/ε⌉)")
    solve_tree.add_argument("--emit-strategy", type=Path)
    solve_tree.add_argument("--stats", action="store_true")
    solve_tree.add_argument("--oracle-check", action="store_true")

    oracle = commands.add_parser("oracle", help="小规模暴力极小极大")
    _add_common(oracle)
    _add_instance(oracle)
    oracle.add_argument("--distribution", help="uniform 或分布文件")
    oracle.add_argument("--emit-strategy", type=Path)

    evaluate = commands.add_parser("eval", help="评估策略文件的最坏情况代价")
    _add_common(evaluate)
    _add_instance(evaluate)
    evaluate.add_argument("--strategy", type=Path, required=True)
    evaluate.add_argument("--check-k", type=_int_list, default=[], help="逗号分隔的 k，检查是否为 k-cut")

    convert = commands.add_parser("convert-kcut", help="把策略转换为 k-cut 策略")
    _add_common(convert)
    _add_instance(convert)
    convert.add_argument("--strategy", type=Path, required=True)
    convert.add_argument("--k", type=int, default=3)
    convert.add_argument("--epsilon", type=float)
    convert.add_argument("--emit-strategy", type=Path)

    bounds = commands.add_parser("bounds", help="下界与二分查找代价")
    _add_common(bounds)
    bounds.add_argument("--n", type=int, required=True)
    bounds.add_argument("--cost", default="sym:0,1")

    constant = commands.add_parser("constant", help="OPT(n)/n 扫描，输出 CSV")
    _add_common(constant)
    constant.add_argument("--cost", default="sym:0,1")
    constant.add_argument("--n-list", type=_int_list, default=[32, 64, 128])
    constant.add_argument("--csv", dest="csv_path", type=Path)
    constant.add_argument("--stable", action="store_true", help="runtime_ms 记为 0，便于比对")

    lowerbound = commands.add_parser("lowerbound", help="阈值实例与 γ 策略实验，输出 CSV")
    _add_common(lowerbound)
    lowerbound.add_argument("--threshold-n", dest="threshold_ns", type=_int_list, default=[15, 31, 63])
    lowerbound.add_argument("--gamma-n", dest="gamma_ns", type=_int_list, default=[4096])
    lowerbound.add_argument("--csv", dest="csv_path", type=Path)

    sim = commands.add_parser("simulate", help="让对手回答策略的查询")
    _add_common(sim)
    _add_instance(sim)
    sim.add_argument("--strategy", type=Path, help="缺省时在路径上使用二分查找")
    sim.add_argument("--adversary", choices=["larger-side", "fixed"], default="larger-side")
    sim.add_argument("--target", type=int)
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {key: value for key, value in vars(args).items() if key in RunConfig.model_fields and value is not None}
    return RunConfig(**fields)


def _instance(config: RunConfig) -> Tree:
    if config.tree is not None:
        return load_tree(config.tree)
    if config.random_tree is not None:
        return random_tree(config.random_tree, random.Random(config.seed))
    assert config.n is not None
    return path(config.n)


def _line_size(t: Tree, command: str) -> int:
    if not t.is_line:
        raise SearchInputError(f"{command} 只适用于路径 1..n")
    return t.n


def _strategy_node(s: SearchTree) -> StrategyNode:
    return StrategyNode.model_validate(to_dict(s))


def _stats_model(stats: Optional[SolverStats]) -> Optional[SolverStatsModel]:
    return SolverStatsModel(**stats.to_dict()) if stats is not None else None


def _emit(config: RunConfig, s: SearchTree) -> None:
    if config.emit_strategy is not None:
        save_strategy(s, config.emit_strategy)
        logger.info("策略已写出：%s", config.emit_strategy)


def _write(config: RunConfig, report: BaseModel) -> None:
    if config.json_path is not None:
        write_report(report, config.json_path)


def _run_line_oracle(n: int, c: CostModel, config: RunConfig, limits: SolverLimits) -> OracleResult:
    if config.distribution is not None:
        return brute_force_expected_line(n, c, load_distribution(config.distribution, n), limits)
    return brute_force_line(n, c, limits)


def _solve_line(config: RunConfig) -> int:
    limits = config.limits()
    n = _line_size(_instance(config), "solve-line")
    c = parse_cost_spec(config.cost)
    if config.distribution is not None:
        result = solve_line_distributional(n, c, load_distribution(config.distribution, n))
    else:
        if isinstance(c, Tabulated):
            raise SearchInputError("table 代价模型只支持 oracle 与 --distribution")
        if config.as_bivariate and not isinstance(c, BivariatePoly):
            c = bivariate_from_asymmetric(c)  # type: ignore[arg-type]
        if isinstance(c, BivariatePoly):
            result = solve_line_bivariate(n, c, limits)
        else:
            result = solve_line_poly(n, c, limits)
    oracle_value = None
    if config.oracle_check:
        oracle_value = _run_line_oracle(n, c, config, limits).value

    stats = result.stats if config.stats else None
    print(render_solve("路径求解", n, config.cost, result.value, stats=stats, oracle_value=oracle_value))
    _emit(config, result.strategy)
    _write(
        config,
        SolveReport(
            command="solve-line",
            n=n,
            cost=config.cost,
            value=str(result.value),
            oracle_value=None if oracle_value is None else str(oracle_value),
            stats=_stats_model(result.stats),
            strategy=_strategy_node(result.strategy),
        ),
    )
    return EXIT_OK


def _solve_tree(config: RunConfig) -> int:
    limits = config.limits()
    t = _instance(config)
    c = parse_cost_spec(config.cost)
    k = config.k if config.k is not None else 3
    result = solve_tree_kcut(t, c, k, limits)  # type: ignore[arg-type]
    oracle_value = None
    if config.oracle_check:
        oracle_value = brute_force_tree(t, c, limits).value
        ratio = Fraction(result.value, oracle_value) if oracle_value else Fraction(1)
        logger.info("k-cut 值 / 最优值 = %s", ratio)

    stats = result.stats if config.stats else None
    print(
        render_solve(
            "树上 k-cut 求解",
            t.n,
            config.cost,
            result.value,
            stats=stats,
            k=k,
            guarantee=result.guarantee,
            oracle_value=oracle_value,
        )
    )
    _emit(config, result.strategy)
    _write(
        config,
        SolveReport(
            command="solve-tree",
            n=t.n,
            cost=config.cost,
            value=str(result.value),
            k=k,
            guarantee=None if result.guarantee is None else str(result.guarantee),
            oracle_value=None if oracle_value is None else str(oracle_value),
            stats=_stats_model(result.stats),
            strategy=_strategy_node(result.strategy),
        ),
    )
    return EXIT_OK


def _oracle(config: RunConfig) -> int:
    limits = config.limits()
    t = _instance(config)
    c = parse_cost_spec(config.cost)
    if config.distribution is not None or t.is_line:
        result = _run_line_oracle(_line_size(t, "oracle --distribution"), c, config, limits)
    else:
        result = brute_force_tree(t, c, limits)
    print(render_solve("暴力预言机", t.n, config.cost, result.value))
    _emit(config, result.strategy)
    _write(
        config,
        SolveReport(
            command="oracle",
            n=t.n,
            cost=config.cost,
            value=str(result.value),
            stats=SolverStatsModel(states_expanded=result.nodes_explored),
            strategy=_strategy_node(result.strategy),
        ),
    )
    return EXIT_OK


def _eval(config: RunConfig) -> int:
    t = _instance(config)
    c = parse_cost_spec(config.cost)
    assert config.strategy is not None
    s = load_strategy(config.strategy, t)
    worst, argmax = worst_case_cost(t, c, s)
    kcut = {k: is_kcut(t, s, k) for k in config.check_k}
    print(render_eval(t.n, config.cost, worst, argmax, kcut))
    _write(
        config,
        EvalReport(
            n=t.n,
            cost=config.cost,
            worst_case_cost=worst,
            argmax_target=argmax,
            is_kcut={str(k): value for k, value in kcut.items()},
        ),
    )
    return EXIT_OK


def _convert(config: RunConfig) -> int:
    t = _instance(config)
    c = parse_cost_spec(config.cost)
    assert config.strategy is not None
    k = config.k if config.k is not None else 3
    before = load_strategy(config.strategy, t)
    after = convert_to_kcut(t, before, k)
    before_cost, _ = worst_case_cost(t, c, before)
    after_cost, _ = worst_case_cost(t, c, after)
    inflation = max_inflation(t, c, before, after)
    inflation_text = "inf" if inflation is None else str(inflation)
    guarantee = kcut_guarantee(k)
    print(render_convert(k, before_cost, after_cost, inflation_text, guarantee))
    _emit(config, after)
    _write(
        config,
        ConvertReport(
            k=k,
            before_cost=before_cost,
            after_cost=after_cost,
            max_inflation=inflation_text,
            guarantee=str(guarantee),
            strategy=_strategy_node(after),
        ),
    )
    return EXIT_OK


def _bounds(config: RunConfig) -> int:
    assert config.n is not None
    n = config.n
    c = parse_cost_spec(config.cost)
    lower = list(opt_lower_bounds(n, c))
    bs_cost, _ = worst_case_cost(path(n), c, binary_search_strategy(n))
    bound = bs_cost_upper_bound(n, c)
    print(render_bounds(n, config.cost, lower, bs_cost, bound))
    _write(config, BoundsReport(n=n, cost=config.cost, lower_bounds=lower, bs_cost=bs_cost, bs_upper_bound=bound))
    return EXIT_OK


def _csv(config: RunConfig, frame: pd.DataFrame) -> None:
    text = frame.to_csv(index=False)
    if config.csv_path is not None:
        config.csv_path.parent.mkdir(parents=True, exist_ok=True)
        config.csv_path.write_text(text, encoding="utf-8")
    sys.stdout.write(text)


def _constant(config: RunConfig) -> int:
    c = parse_cost_spec(config.cost)
    frame = constant_sweep(c, config.n_list, config.limits(), stable=config.stable)  # type: ignore[arg-type]
    _csv(config, frame)
    return EXIT_OK


def _lowerbound(config: RunConfig) -> int:
    _csv(config, lowerbound_experiment(config.threshold_ns, config.gamma_ns))
    return EXIT_OK


def _simulate(config: RunConfig) -> int:
    t = _instance(config)
    c = parse_cost_spec(config.cost)
    if config.strategy is not None:
        s = load_strategy(config.strategy, t)
    else:
        s = binary_search_strategy(_line_size(t, "simulate 缺省策略"))
    if config.adversary == "fixed":
        if config.target is None:
            raise SearchInputError("fixed 对手需要 --target")
        adversary = FixedTarget(config.target)
    else:
        adversary = LargerSide()
    transcript = simulate(t, c, s, adversary)
    print(render_simulate(adversary.name, transcript))
    _write(config, SimulateReport(adversary=adversary.name, transcript=transcript.to_dict()))
    return EXIT_OK


HANDLERS = {
    "solve-line": _solve_line,
    "solve-tree": _solve_tree,
    "oracle": _oracle,
    "eval": _eval,
    "convert-kcut": _convert,
    "bounds": _bounds,
    "constant": _constant,
    "lowerbound": _lowerbound,
    "simulate": _simulate,
}


def run(config: RunConfig) -> int:
    """执行子命令并返回退出码：0 成功，2 输入错误，3 超出规模上限。"""
    try:
        return HANDLERS[config.command](config)
    except SizeLimitError as exc:
        logger.error("超出规模上限：%s", exc)
        return EXIT_LIMIT
    except SearchInputError as exc:
        logger.error("输入错误：%s", exc)
        return EXIT_INPUT


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(message)s")
    try:
        config = config_from_args(args)
    except ValidationError as exc:
        first = exc.errors()[0]
        logger.error("参数错误：%s", first.get("msg"))
        return EXIT_INPUT
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
