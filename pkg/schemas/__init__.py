from .documents import (
    AsymPolyDocument,
    BivariateTerm,
    BivarPolyDocument,
    CostDocument,
    CostFile,
    DistributionDocument,
    SymPolyDocument,
    TableDocument,
    TreeDocument,
)
from .reports import (
    SCHEMA_VERSION,
    BoundsReport,
    ConvertReport,
    EvalReport,
    SimulateReport,
    SolveReport,
    SolverStatsModel,
)
from .strategy import StrategyNode

__all__ = [
    "AsymPolyDocument",
    "BivariateTerm",
    "BivarPolyDocument",
    "BoundsReport",
    "ConvertReport",
    "CostDocument",
    "CostFile",
    "DistributionDocument",
    "EvalReport",
    "SCHEMA_VERSION",
    "SimulateReport",
    "SolveReport",
    "SolverStatsModel",
    "StrategyNode",
    "SymPolyDocument",
    "TableDocument",
    "TreeDocument",
]
