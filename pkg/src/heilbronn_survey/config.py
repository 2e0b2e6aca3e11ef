from __future__ import annotations

import dataclasses
import os

from dataclasses import dataclass
from pathlib import Path
from typing import Any
from typing import ClassVar

from heilbronn_survey.exceptions import ConfigError


THREADS_ENVIRONMENT_VARIABLE = "HEILBRONN_THREADS"


@dataclass(frozen=True)
class RunConfig:
    """
    Settings shared by every subcommand. Later sources override earlier ones:
    defaults, the ``--config`` file, command-line flags, then the environment.
    """

    FORMATS: ClassVar[tuple[str, ...]] = ("json", "csv")
    MODES: ClassVar[tuple[str, ...]] = ("exhaustive", "mc")

    pair_bound: int = 20
    pv_constant: float = 1.0
    enumeration_cap: int = 10**8
    seed: int = 0
    output_format: str = "json"
    threads: int = 1
    samples: int = 10**4
    mode: str = "exhaustive"

    def __post_init__(self) -> None:
        if self.pair_bound < 2:
            raise ConfigError(f"pair_bound must be at least 2, got {self.pair_bound}.")
        if self.pv_constant <= 0:
            raise ConfigError(f"pv_constant must be positive, got {self.pv_constant}.")
        if self.enumeration_cap < 10**4:
            raise ConfigError(
                f"enumeration_cap must be at least 10000, got {self.enumeration_cap}."
            )
        if not -(1 << 63) <= self.seed < 1 << 64:
            raise ConfigError(f"seed must fit in 64 bits, got {self.seed}.")
        if self.output_format not in self.FORMATS:
            raise ConfigError(
                f"Invalid output format: {self.output_format}"
                f" (expected one of {', '.join(self.FORMATS)})."
            )
        if self.threads < 1:
            raise ConfigError(f"threads must be at least 1, got {self.threads}.")
        if self.samples < 1:
            raise ConfigError(f"samples must be at least 1, got {self.samples}.")
        if self.mode not in self.MODES:
            raise ConfigError(
                f"Invalid survey mode: {self.mode}"
                f" (expected one of {', '.join(self.MODES)})."
            )

    @classmethod
    def keys(cls) -> list[str]:
        return [f.name for f in dataclasses.fields(cls)]

    def merge(self, values: dict[str, Any]) -> RunConfig:
        """
        A copy with the given (already typed or textual) values applied;
        ``None`` values are ignored.
        """
        changes = {}
        types = {f.name: f.type for f in dataclasses.fields(self)}
        for key, value in values.items():
            name = key.replace("-", "_")
            if name not in types:
                raise ConfigError(f"Unknown configuration key: {key}.")
            if value is None:
                continue
            changes[name] = _coerce(name, str(types[name]), value)

        return dataclasses.replace(self, **changes)

    def with_environment(self, environ: dict[str, str] | None = None) -> RunConfig:
        environ = dict(os.environ) if environ is None else environ
        threads = environ.get(THREADS_ENVIRONMENT_VARIABLE)
        if not threads:
            return self

        return self.merge({"threads": threads})

    def as_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


def read_config_file(path: Path) -> dict[str, str]:
    """
    Read ``key = value`` lines; blank lines and ``#`` comments are skipped.
    """
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}.") from e

    values = {}
    for number, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"{path}:{number}: expected key = value, got {raw!r}.")
        values[key.strip().replace("-", "_")] = value.strip().strip("\"'")

    return values


def load_config(
    path: Path | None = None,
    overrides: dict[str, Any] | None = None,
    environ: dict[str, str] | None = None,
) -> RunConfig:
    config = RunConfig()
    if path is not None:
        config = config.merge(read_config_file(path))
    if overrides:
        config = config.merge(overrides)

    return config.with_environment(environ)


def _coerce(name: str, annotation: str, value: Any) -> Any:
    try:
        if annotation == "int":
            if isinstance(value, str):
                return int(value.replace("_", ""), 0)
            return int(value)
        if annotation == "float":
            return float(value)
    except ValueError as e:
        raise ConfigError(f"Invalid value for {name}: {value!r}.") from e

    return str(value)
