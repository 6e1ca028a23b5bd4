# commands/common.py
"""
Shared plumbing for the subcommands: the global-option context, config
resolution and the exit-code carrying exceptions.

Exit codes:
    0  success
    2  usage / configuration error   (click.UsageError, click.BadParameter)
    3  data or file-format error     (DataError)
    4  numerical failure             (NumericalError)
"""

from __future__ import annotations
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import click
from pydantic import ValidationError

from services.storage import RunConfig, load_run_config, with_overrides


class DataError(click.ClickException):
    exit_code = 3

    def format_message(self) -> str:
        return f"❌ {self.message}"


class NumericalError(click.ClickException):
    exit_code = 4

    def format_message(self) -> str:
        return f"❌ {self.message}"


@dataclass
class CliContext:
    config_path: Optional[str] = None
    seed: Optional[int] = None
    out_dir: Optional[str] = None
    fmt: str = "bin"
    verbose: bool = False
    _config: Optional[RunConfig] = None

    @property
    def config(self) -> RunConfig:
        """Resolved RunConfig: file (or defaults) plus --seed / --out-dir."""
        if self._config is None:
            self._config = resolve_config(self.config_path, self.seed, self.out_dir)
        return self._config


pass_cli = click.make_pass_decorator(CliContext)


def _validation_summary(e: ValidationError) -> str:
    parts = []
    for err in e.errors():
        loc = ".".join(str(p) for p in err.get("loc", ())) or "config"
        parts.append(f"{loc}: {err.get('msg')}")
    return "; ".join(parts)


def resolve_config(path: Optional[str], seed: Optional[int], out_dir: Optional[str]) -> RunConfig:
    try:
        return with_overrides(load_run_config(path), seed=seed, out_dir=out_dir)
    except ValidationError as e:
        raise click.UsageError(f"invalid config: {_validation_summary(e)}") from e
    except (ValueError, OSError) as e:
        raise click.UsageError(f"cannot load config: {e}") from e


def parse_levels(ctx, param, value: Optional[str]) -> Optional[List[float]]:
    """Comma-separated LO levels, e.g. 5e7,1e8,2e8."""
    if value is None:
        return None
    try:
        levels = [float(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"not a comma-separated list of numbers: {value!r}")
    if not levels or any(v <= 0 for v in levels):
        raise click.BadParameter("LO levels must be positive numbers")
    return levels


def resolve_out_dir(cli: CliContext, fallback: Optional[str | Path] = None) -> Path:
    if cli.out_dir is not None:
        return Path(cli.out_dir)
    if fallback is not None:
        return Path(fallback)
    return Path(cli.config.output.out_dir)
