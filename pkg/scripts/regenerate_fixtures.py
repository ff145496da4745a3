"""重新生成回归比对用的策略与 CSV 文件。"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

# 确保项目根目录在 Python 模块搜索路径中
ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

import env  # noqa: F401,E402
from datahub.formats import save_strategy, write_report  # noqa: E402
from engine.costs import SymmetricPoly, pricing  # noqa: E402
from engine.experiments import constant_sweep, lowerbound_experiment  # noqa: E402
from engine.line_solver import solve_line_bivariate, solve_line_poly  # noqa: E402
from engine.strategy import to_dict  # noqa: E402
from schemas.reports import SolveReport  # noqa: E402
from schemas.strategy import StrategyNode  # noqa: E402

logger = logging.getLogger(__name__)


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="重新生成回归比对文件。")
    parser.add_argument("--out", type=Path, default=ROOT / "fixtures", help="输出目录，默认 fixtures/")
    parser.add_argument("--n-list", default="32,64,128", help="常数估计的 n 列表")
    return parser.parse_args()


def main() -> None:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = parse_args()
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)

    linear = solve_line_poly(10, SymmetricPoly((0, 1)))
    save_strategy(linear.strategy, out / "linear_n10.json")
    save_strategy(linear.strategy, out / "linear_n10.dot")

    priced = solve_line_bivariate(19, pricing())
    save_strategy(priced.strategy, out / "pricing_n19.json")
    write_report(
        SolveReport(
            command="solve-line",
            n=19,
            cost="preset:pricing",
            value=str(priced.value),
            strategy=StrategyNode.model_validate(to_dict(priced.strategy)),
        ),
        out / "pricing_n19_report.json",
    )

    n_list = [int(part) for part in args.n_list.split(",") if part.strip()]
    constant_sweep(SymmetricPoly((0, 1)), n_list, stable=True).to_csv(out / "constant.csv", index=False)
    lowerbound_experiment([15, 31, 63], [4096]).to_csv(out / "lowerbound.csv", index=False)
    logger.info("回归文件已写入 %s", out)


if __name__ == "__main__":
    main()
