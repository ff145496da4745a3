"""代价相关目标搜索的求解引擎。"""

from .costs import (  # noqa: F401
    PRESETS,
    AsymmetricPoly,
    BivariatePoly,
    CostModel,
    SymmetricPoly,
    Tabulated,
    TargetDistribution,
    ValidationReport,
    eval_cost,
    validate,
)
from .errors import SearchInputError, SizeLimitError, StrategyFormatError, TopologyMismatchError  # noqa: F401
from .graph import Tree, path  # noqa: F401
from .line_solver import (  # noqa: F401
    SolveResult,
    binary_search_strategy,
    bs_cost_upper_bound,
    opt_lower_bounds,
    solve_line_bivariate,
    solve_line_distributional,
    solve_line_poly,
)
from .oracle import OracleResult, brute_force_expected_line, brute_force_line, brute_force_tree  # noqa: F401
from .strategy import SearchTree, convert_to_kcut, is_kcut, simulate, validate_stt, worst_case_cost  # noqa: F401
from .tree_solver import KcutSolveResult, k_for_epsilon, solve_tree_kcut  # noqa: F401

__all__ = [
    "PRESETS",
    "AsymmetricPoly",
    "BivariatePoly",
    "CostModel",
    "KcutSolveResult",
    "OracleResult",
    "SearchInputError",
    "SearchTree",
    "SizeLimitError",
    "SolveResult",
    "StrategyFormatError",
    "SymmetricPoly",
    "Tabulated",
    "TargetDistribution",
    "TopologyMismatchError",
    "Tree",
    "ValidationReport",
    "binary_search_strategy",
    "brute_force_expected_line",
    "brute_force_line",
    "brute_force_tree",
    "bs_cost_upper_bound",
    "convert_to_kcut",
    "eval_cost",
    "is_kcut",
    "k_for_epsilon",
    "opt_lower_bounds",
    "path",
    "simulate",
    "solve_line_bivariate",
    "solve_line_distributional",
    "solve_line_poly",
    "solve_tree_kcut",
    "validate",
    "validate_stt",
    "worst_case_cost",
]
