from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

CACHE_ENV = "TSGRAPH_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "tsgraph"


@dataclass
class Config:
    n_max_exact: int = 7
    mu_min: float = 10.0
    slack_bits: float = 2.0
    berry_esseen_A: float = 1.0
    cache_dir: Path = field(default_factory=default_cache_dir)
    seed: int = 0

    def __post_init__(self):
        for name in ("n_max_exact", "mu_min", "slack_bits", "berry_esseen_A"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        self.cache_dir = Path(self.cache_dir)

    def ensure_cache_dir(self) -> Path:
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        if not os.access(self.cache_dir, os.W_OK):
            raise PermissionError(f"cache directory {self.cache_dir} is not writable")
        return self.cache_dir
