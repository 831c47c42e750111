"""Key = value run configuration.

Lines are ``key = value``; ``#`` starts a comment.  Presets are written as
``preset.<name> = n, m, p``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigError

DEFAULT_PRESETS = {
    "small": (512, 64, 0.05),
    "medium": (4096, 256, 0.02),
    "large": (51200, 1024, 0.01),
}


@dataclass(frozen=True)
class RunConfig:
    pairing_budget: int = 1_000_000
    minor_budget: int = 1_000_000
    chi_limit: int = 64
    minor_limit: int = 12
    results_path: str = "results.jsonl"
    trace_dir: str = "."
    presets: dict = field(default_factory=lambda: dict(DEFAULT_PRESETS))

    def __post_init__(self):
        for name in ("pairing_budget", "minor_budget", "chi_limit", "minor_limit"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")

    def preset(self, name: str) -> tuple[int, int, float]:
        try:
            return self.presets[name]
        except KeyError:
            raise ConfigError(f"unknown preset {name!r}; known: {sorted(self.presets)}") from None


_INT_KEYS = {"pairing_budget", "minor_budget", "chi_limit", "minor_limit"}
_STR_KEYS = {"results_path", "trace_dir"}


def parse_config(text: str) -> RunConfig:
    values: dict = {}
    presets = dict(DEFAULT_PRESETS)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (s.strip() for s in line.partition("="))
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        if key in _INT_KEYS:
            try:
                values[key] = int(value)
            except ValueError:
                raise ConfigError(f"line {lineno}: {key} needs an integer, got {value!r}") from None
        elif key in _STR_KEYS:
            values[key] = value
        elif key.startswith("preset.") and len(key) > 7:
            parts = [s.strip() for s in value.split(",")]
            try:
                n, m, p = int(parts[0]), int(parts[1]), float(parts[2])
            except (IndexError, ValueError):
                raise ConfigError(f"line {lineno}: preset needs 'n, m, p'") from None
            if len(parts) != 3 or n < 1 or m < 1 or not 0 <= p <= 1:
                raise ConfigError(f"line {lineno}: preset values out of range")
            presets[key[7:]] = (n, m, p)
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    return RunConfig(**values, presets=presets)


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)
