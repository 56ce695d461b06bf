"""Strict run configuration shared by the command-line subcommands.

A configuration file is a JSON object with the optional sections ``protocol``,
``imperfections``, ``schedule``, ``grid`` and ``output`` plus a top-level
``seed``. Unknown keys anywhere are rejected. Command-line flags override
values read from the file.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigurationError
from .imperfections import ImperfectionModel, PhaseNoiseModel
from .io import FORMATS


@dataclass(frozen=True)
class ProtocolSection:
    """Register, pulse and protocol settings.

    ``rounds = None`` selects the smallest feasible round number, ``delta = None``
    the closed-form or optimized detuning, and ``coupling`` (if set) overrides
    ``cooperativity``.
    """

    rounds: int | None = None
    mode: str = "reflection"
    cooperativity: float = 1.0
    coupling: float | None = None
    kappa: float = 200.0
    gamma: float = 1.0
    delta: float | None = None
    sigma_omega: float = 0.2
    n_t: float = 10.0
    optimize: str = "none"
    threshold: float = 0.99
    root: str = "plus"


@dataclass(frozen=True)
class ImperfectionSection:
    eta_i: float = 1.0
    eta_r: float = 1.0
    eta_m: float = 1.0
    mismatch: str = "identity"
    loss_model: str = "multiplicative"
    delta_0: float = 0.0
    sigma_delta: float = 0.0

    def model(self) -> ImperfectionModel:
        return ImperfectionModel(self.eta_i, self.eta_r, self.eta_m, self.mismatch,
                                 self.loss_model, PhaseNoiseModel(self.delta_0, self.sigma_delta))


@dataclass(frozen=True)
class ScheduleSection:
    modulation: str = "stepwise"
    amplitude: float | None = None
    refine: bool = False
    richardson: bool = False


@dataclass(frozen=True)
class GridSection:
    span_sigmas: float = 10.0
    n_points: int = 4001


@dataclass(frozen=True)
class OutputSection:
    path: str = "-"
    format: str = "csv"


SECTIONS = {
    "protocol": ProtocolSection,
    "imperfections": ImperfectionSection,
    "schedule": ScheduleSection,
    "grid": GridSection,
    "output": OutputSection,
}

OPTIMIZE_CHOICES = ("none", "fidelity", "pt_floor")


@dataclass(frozen=True)
class RunConfig:
    protocol: ProtocolSection = field(default_factory=ProtocolSection)
    imperfections: ImperfectionSection = field(default_factory=ImperfectionSection)
    schedule: ScheduleSection = field(default_factory=ScheduleSection)
    grid: GridSection = field(default_factory=GridSection)
    output: OutputSection = field(default_factory=OutputSection)
    seed: int = 0

    def __post_init__(self):
        if self.output.format not in FORMATS:
            raise ConfigurationError(f"output.format must be one of {FORMATS}")
        if self.protocol.optimize not in OPTIMIZE_CHOICES:
            raise ConfigurationError(f"protocol.optimize must be one of {OPTIMIZE_CHOICES}")
        if self.protocol.root not in ("plus", "minus"):
            raise ConfigurationError("protocol.root must be 'plus' or 'minus'")

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigurationError("configuration must be a JSON object")
        kwargs = {}
        for key, value in data.items():
            if key == "seed":
                if not isinstance(value, int) or isinstance(value, bool):
                    raise ConfigurationError("seed must be an integer")
                kwargs["seed"] = value
            elif key in SECTIONS:
                kwargs[key] = _section(SECTIONS[key], key, value)
            else:
                raise ConfigurationError(f"unknown configuration key {key!r}")
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return asdict(self)

    def override(self, values: dict) -> "RunConfig":
        """Copy with ``{"section.key": value}`` overrides applied (``None`` values skipped)."""
        cfg = self
        for dotted, value in values.items():
            if value is None:
                continue
            if dotted == "seed":
                cfg = replace(cfg, seed=int(value))
                continue
            section, key = dotted.split(".")
            sub = getattr(cfg, section)
            if key not in {f.name for f in fields(sub)}:
                raise ConfigurationError(f"unknown configuration key {dotted!r}")
            cfg = replace(cfg, **{section: replace(sub, **{key: value})})
        return cfg


def _section(cls, name, data):
    if not isinstance(data, dict):
        raise ConfigurationError(f"section {name!r} must be an object")
    allowed = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigurationError(f"unknown key(s) in {name!r}: {', '.join(unknown)}")
    return cls(**data)


def load_config(path) -> RunConfig:
    """Read a strict JSON configuration file."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read configuration {path}: {exc}") from exc
    return RunConfig.from_dict(data)
