"""Flat dotted-key configuration file parsing.

Format: one ``key = value`` per line, ``#`` starts a comment. Example:

    store.path = /var/lib/graphhaus/hog.db
    scheduler.levels = 1, 30, 300
    scheduler.workers = 3
    scheduler.reserved_cores = 1
    api.port = 8080
    api.rate_limit = 10
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple, Union

from .scheduler import DEFAULT_LEVELS


class ConfigError(Exception):
    pass


@dataclass
class Config:
    store_path: str = "graphhaus.db"
    scheduler_levels: Tuple[float, ...] = DEFAULT_LEVELS
    scheduler_workers: Optional[int] = None
    scheduler_reserved_cores: int = 1
    api_port: int = 8080
    api_rate_limit_seconds: float = 10.0


def parse_config(text: str) -> Config:
    cfg = Config()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, value = (part.strip() for part in line.partition("="))
        try:
            if key == "store.path":
                cfg.store_path = value
            elif key == "scheduler.levels":
                cfg.scheduler_levels = tuple(float(v) for v in value.split(","))
            elif key == "scheduler.workers":
                cfg.scheduler_workers = int(value)
            elif key == "scheduler.reserved_cores":
                cfg.scheduler_reserved_cores = int(value)
            elif key == "api.port":
                cfg.api_port = int(value)
            elif key == "api.rate_limit":
                cfg.api_rate_limit_seconds = float(value)
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from None
    return cfg


def load_config(path: Union[str, Path]) -> Config:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)
