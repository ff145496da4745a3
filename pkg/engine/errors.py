"""搜索求解器统一异常定义。"""

from __future__ import annotations


class SearchInputError(ValueError):
    """输入实例不合法：顶点编号、集合、代价模型或文件内容有误。"""


class TopologyMismatchError(SearchInputError):
    """仅适用于路径的代价模型被用于一般树。"""


class StrategyFormatError(SearchInputError):
    """策略文档格式错误或标签不是双射。"""


class SizeLimitError(RuntimeError):
    """实例规模或状态数超过配置上限。"""
