"""
求解器共享的记忆化表。

写入是幂等的：同一键只能对应同一个值，冲突写入说明状态编码有误，直接断言失败。
读写都在锁内完成，兄弟子问题可以并行求解。
"""

from __future__ import annotations

import logging
import threading
from typing import Any, Dict, Hashable, Optional

logger = logging.getLogger(__name__)

_MISSING = object()


class MemoTable:
    """带命中统计的线程安全字典。"""

    def __init__(self, name: str = "memo") -> None:
        self.name = name
        self._data: Dict[Hashable, Any] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get(self, key: Hashable, default: Optional[Any] = None) -> Any:
        with self._lock:
            value = self._data.get(key, _MISSING)
            if value is _MISSING:
                self.misses += 1
                return default
            self.hits += 1
            return value

    def __contains__(self, key: Hashable) -> bool:
        with self._lock:
            return key in self._data

    def put(self, key: Hashable, value: Any) -> Any:
        with self._lock:
            existing = self._data.get(key, _MISSING)
            if existing is _MISSING:
                self._data[key] = value
                return value
        if existing != value:
            raise AssertionError(f"{self.name} 记忆化冲突：键 {key!r} 已有 {existing!r}，新值 {value!r}")
        return existing

    def peek(self, key: Hashable, default: Optional[Any] = None) -> Any:
        """不计入统计的读取，供策略回放使用。"""
        with self._lock:
            return self._data.get(key, default)

    def __len__(self) -> int:
        with self._lock:
            return len(self._data)

    def stats(self) -> Dict[str, int]:
        with self._lock:
            return {"entries": len(self._data), "hits": self.hits, "misses": self.misses}

    def clear(self) -> None:
        with self._lock:
            self._data.clear()
            self.hits = 0
            self.misses = 0
        logger.debug("已清空记忆化表 %s", self.name)
