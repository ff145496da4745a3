"""
启动时加载项目根目录下的 .env，供 infra.settings 读取 COSTSEARCH_* 上限。

已存在的环境变量优先；未安装 python-dotenv 时什么也不做。
"""

from __future__ import annotations

from pathlib import Path

try:  # pragma: no cover - 可选依赖
    from dotenv import load_dotenv  # type: ignore
except ImportError:  # pragma: no cover
    load_dotenv = None  # type: ignore

ENV_FILE = Path(__file__).resolve().with_name(".env")

ENV_LOADED = bool(load_dotenv and ENV_FILE.is_file() and load_dotenv(ENV_FILE, override=False))
