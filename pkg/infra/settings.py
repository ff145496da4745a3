"""
求解器运行时配置。

上限来自环境变量（可写在 .env 中），例如 COSTSEARCH_TREE_MAX_STATES；
命令行参数可以在单次运行中覆盖这些默认值。
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

DEFAULT_ORACLE_LINE_MAX_N = 14
DEFAULT_ORACLE_TREE_MAX_N = 10
DEFAULT_ORACLE_EXPECTED_MAX_N = 10
DEFAULT_TREE_MAX_N = 40
DEFAULT_TREE_MAX_STATES = 2_000_000
DEFAULT_LINE_MAX_STATES = 5_000_000
DEFAULT_RECURSION_LIMIT = 100_000


def _parse_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None:
        return default
    try:
        return max(int(raw), 0)
    except ValueError:
        return default


@dataclass(frozen=True)
class SolverLimits:
    oracle_line_max_n: int = DEFAULT_ORACLE_LINE_MAX_N
    oracle_tree_max_n: int = DEFAULT_ORACLE_TREE_MAX_N
    oracle_expected_max_n: int = DEFAULT_ORACLE_EXPECTED_MAX_N
    tree_max_n: int = DEFAULT_TREE_MAX_N
    tree_max_states: int = DEFAULT_TREE_MAX_STATES
    line_max_states: int = DEFAULT_LINE_MAX_STATES
    recursion_limit: int = DEFAULT_RECURSION_LIMIT

    def with_overrides(self, **changes: int | None) -> "SolverLimits":
        """忽略值为 None 的覆盖项。"""
        return replace(self, **{key: value for key, value in changes.items() if value is not None})

    @classmethod
    def from_env(cls) -> "SolverLimits":
        return cls(
            oracle_line_max_n=_parse_int("COSTSEARCH_ORACLE_LINE_MAX_N", DEFAULT_ORACLE_LINE_MAX_N),
            oracle_tree_max_n=_parse_int("COSTSEARCH_ORACLE_TREE_MAX_N", DEFAULT_ORACLE_TREE_MAX_N),
            oracle_expected_max_n=_parse_int("COSTSEARCH_ORACLE_EXPECTED_MAX_N", DEFAULT_ORACLE_EXPECTED_MAX_N),
            tree_max_n=_parse_int("COSTSEARCH_TREE_MAX_N", DEFAULT_TREE_MAX_N),
            tree_max_states=_parse_int("COSTSEARCH_TREE_MAX_STATES", DEFAULT_TREE_MAX_STATES),
            line_max_states=_parse_int("COSTSEARCH_LINE_MAX_STATES", DEFAULT_LINE_MAX_STATES),
            recursion_limit=_parse_int("COSTSEARCH_RECURSION_LIMIT", DEFAULT_RECURSION_LIMIT),
        )


solver_limits = SolverLimits.from_env()
