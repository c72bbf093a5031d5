"""Engine configuration file: one JSON document, unknown keys rejected."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .corpus import FilterConfig
from .errors import ConfigError
from .pipeline import PipelineConfig
from .pv import PvConfig
from .tokenizer import TokenizerConfig

DEFAULT_LISTEN = "127.0.0.1:8000"


@dataclass
class EngineConfig:
    tokenizer: TokenizerConfig = field(default_factory=TokenizerConfig)
    pv: PvConfig = field(default_factory=PvConfig)
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    filter: FilterConfig = field(default_factory=FilterConfig)
    listen_address: str = DEFAULT_LISTEN

    @classmethod
    def from_dict(cls, d: dict) -> "EngineConfig":
        unknown = set(d) - {"tokenizer", "pv", "pipeline", "filter", "listen_address"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(
                tokenizer=TokenizerConfig.from_dict(d.get("tokenizer", {})),
                pv=PvConfig.from_dict(d.get("pv", {})),
                pipeline=PipelineConfig.from_dict(d.get("pipeline", {})),
                filter=FilterConfig.from_dict(d.get("filter", {})),
                listen_address=d.get("listen_address", DEFAULT_LISTEN),
            )
        except (ValueError, TypeError) as e:
            raise ConfigError(str(e)) from e

    @classmethod
    def from_file(cls, path) -> "EngineConfig":
        try:
            with open(path, encoding="utf-8") as f:
                d = json.load(f)
        except OSError as e:
            raise ConfigError(f"cannot read config file: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"config file is not valid JSON: {e}") from e
        if not isinstance(d, dict):
            raise ConfigError("config file must hold a JSON object")
        return cls.from_dict(d)

    def listen_host_port(self) -> tuple[str, int]:
        host, sep, port = self.listen_address.rpartition(":")
        if not sep or not port.isdigit():
            raise ConfigError(f"bad listen_address: {self.listen_address!r}")
        return host, int(port)
