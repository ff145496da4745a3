"""costsearch 的实例文件读写与随机实例生成工具。"""

from .formats import (  # noqa: F401
    load_cost,
    load_distribution,
    load_strategy,
    load_tree,
    parse_cost_spec,
    save_cost,
    save_distribution,
    save_strategy,
    save_tree,
    write_report,
)
from .instances import (  # noqa: F401
    random_asymmetric,
    random_distribution,
    random_monotone_table,
    random_poly,
    random_stt,
    random_tree,
)

__all__ = [
    "load_cost",
    "load_distribution",
    "load_strategy",
    "load_tree",
    "parse_cost_spec",
    "random_asymmetric",
    "random_distribution",
    "random_monotone_table",
    "random_poly",
    "random_stt",
    "random_tree",
    "save_cost",
    "save_distribution",
    "save_strategy",
    "save_tree",
    "write_report",
]
