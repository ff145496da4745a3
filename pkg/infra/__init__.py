"""运行时基础设施：环境变量中的求解上限与共享记忆表。"""

from __future__ import annotations

from .memo import MemoTable  # noqa: F401
from .settings import SolverLimits, solver_limits  # noqa: F401

__all__ = ["MemoTable", "SolverLimits", "solver_limits"]
