"""Driving-time sweeps: configuration, evaluation and CSV output.

A config file is flat ``key = value`` text with ``#`` comments::

    temperature_hz = 1580.2
    nu_f_list = 3600, 5000
    tau_steps = 8
"""

from __future__ import annotations

import csv
import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .drive import DEFAULT_SLICES, DEFAULT_TOLERANCE, DriveProtocol, propagator
from .metrics import ThermoRecord, thermo_record
from .thermal import ThermalSpec


class ConfigError(ValueError):
    pass


class SweepError(RuntimeError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    temperature_hz: float = 1580.2
    nu_i: float = 2000.0
    nu_f_list: tuple[float, ...] = (3600.0, 5000.0)
    tau_start: float = 100e-6
    tau_end: float = 800e-6
    tau_steps: int = 8
    slices: int = DEFAULT_SLICES
    tolerance: float = DEFAULT_TOLERANCE
    output_path: str = "sweep.csv"
    plot_path: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "nu_f_list", tuple(float(v) for v in self.nu_f_list))
        checks = [
            ("temperature_hz", self.temperature_hz > 0),
            ("nu_i", self.nu_i > 0),
            ("nu_f_list", len(self.nu_f_list) > 0 and all(v > 0 for v in self.nu_f_list)),
            ("tau_start", self.tau_start > 0),
            ("tau_end", self.tau_end >= self.tau_start),
            ("tau_steps", self.tau_steps >= 1),
            ("slices", self.slices >= 1),
            ("tolerance", self.tolerance > 0),
        ]
        for key, ok in checks:
            if not ok:
                raise ConfigError(f"invalid value for {key}: {getattr(self, key)!r}")
        for key in ("temperature_hz", "nu_i", "tau_start", "tau_end", "tolerance"):
            if not math.isfinite(getattr(self, key)):
                raise ConfigError(f"invalid value for {key}: must be finite")

    @property
    def thermal(self) -> ThermalSpec:
        return ThermalSpec.from_temperature_hz(self.temperature_hz)

    def tau_grid(self) -> np.ndarray:
        """Inclusive, evenly spaced driving times."""
        if self.tau_steps == 1:
            return np.array([self.tau_start])
        return np.linspace(self.tau_start, self.tau_end, self.tau_steps)


# alternative spellings accepted for field names; flags use these too
_ALIASES = {"nu_f": "nu_f_list", "out": "output_path", "plot": "plot_path"}
_FIELDS = {f.name: f for f in dataclasses.fields(SweepConfig)}


def _convert(key: str, raw: str):
    raw = raw.strip()
    if key == "nu_f_list":
        items = [s for s in raw.replace(" ", ",").split(",") if s]
        if not items:
            raise ValueError("empty list")
        return tuple(float(s) for s in items)
    if key in ("tau_steps", "slices"):
        return int(raw)
    if key == "output_path":
        return raw
    if key == "plot_path":
        return raw or None
    return float(raw)


def _canonical_key(key: str) -> str:
    key = key.strip().replace("-", "_")
    return _ALIASES.get(key, key)


def parse_config_text(text: str) -> dict[str, object]:
    """Parse ``key = value`` lines into typed field values."""
    values: dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        raw_key, raw_value = line.split("=", 1)
        key = _canonical_key(raw_key)
        if key not in _FIELDS:
            raise ConfigError(f"line {lineno}: unknown key {raw_key.strip()!r}")
        try:
            values[key] = _convert(key, raw_value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: malformed value for {key}: {exc}") from None
    return values


def parse_config(
    text: str | None = None, overrides: Mapping[str, object] | None = None
) -> SweepConfig:
    """Build a SweepConfig from config-file text and flag overrides.

    Overrides win over file values; defaults fill the rest. Override values
    may be strings (as read from the command line) or already typed.
    """
    values = parse_config_text(text) if text else {}
    for raw_key, value in (overrides or {}).items():
        if value is None:
            continue
        key = _canonical_key(raw_key)
        if key not in _FIELDS:
            raise ConfigError(f"unknown flag --{raw_key.replace('_', '-')}")
        if isinstance(value, str):
            try:
                value = _convert(key, value)
            except ValueError as exc:
                raise ConfigError(
                    f"flag --{raw_key.replace('_', '-')}: malformed value: {exc}"
                ) from None
        values[key] = value
    return SweepConfig(**values)


@dataclass(frozen=True)
class SweepRow:
    nu_f: float
    tau: float
    record: ThermoRecord = field(repr=False)

    def __getattr__(self, name):
        # expose record fields directly on the row
        if name != "record" and name in ThermoRecord.__dataclass_fields__:
            return getattr(self.record, name)
        raise AttributeError(name)


def evaluate_point(cfg: SweepConfig, nu_f: float, tau: float) -> SweepRow:
    protocol = DriveProtocol(cfg.nu_i, nu_f, float(tau), cfg.slices)
    U = propagator(protocol, cfg.tolerance)
    rec = thermo_record(
        protocol.initial_hamiltonian(), protocol.final_hamiltonian(), U, cfg.thermal
    )
    return SweepRow(nu_f=float(nu_f), tau=float(tau), record=rec)


def run_sweep(cfg: SweepConfig) -> list[SweepRow]:
    """Evaluate every (nu_f, tau) grid point, ordered by nu_f then tau."""
    rows = []
    for nu_f in sorted(cfg.nu_f_list):
        for tau in cfg.tau_grid():
            try:
                rows.append(evaluate_point(cfg, nu_f, tau))
            except (ValueError, RuntimeError) as exc:
                raise SweepError(f"grid point nu_f={nu_f:g} Hz, tau={tau:g} s: {exc}") from exc
    return rows


def row_violations(rows: Sequence[SweepRow]) -> list[str]:
    out = []
    for row in rows:
        for v in row.record.violations():
            out.append(f"nu_f={row.nu_f:g} Hz, tau={row.tau:g} s: {v}")
    return out


CSV_HEADER = (
    "nu_f_hz",
    "tau_s",
    "avg_work_hz",
    "delta_f_hz",
    "s_irr_work",
    "s_irr_relent",
    "coherence",
    "population",
    "bures_length",
    "bound",
    "jarzynski_lhs",
    "jarzynski_rhs",
)

_RECORD_COLUMNS = (
    "avg_work",
    "delta_F",
    "s_irr_work_route",
    "s_irr_relent_route",
    "coherence_term",
    "population_term",
    "bures_length",
    "bound_value",
    "jarzynski_lhs",
    "jarzynski_rhs",
)


def format_number(x: float) -> str:
    s = f"{x:.12g}"
    return "0" if s == "-0" else s


def csv_lines(rows: Sequence[SweepRow]) -> list[list[str]]:
    lines = [list(CSV_HEADER)]
    for row in rows:
        values = [row.nu_f, row.tau] + [getattr(row.record, c) for c in _RECORD_COLUMNS]
        lines.append([format_number(v) for v in values])
    return lines


def emit_csv(rows: Sequence[SweepRow], path) -> Path:
    """Write rows as UTF-8 CSV with a fixed header and 12 significant digits."""
    if not rows:
        raise ValueError("no rows to write")
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as fh:
            csv.writer(fh, lineterminator="\n").writerows(csv_lines(rows))
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc
    return path


def read_csv(path) -> list[dict[str, float]]:
    with Path(path).open(encoding="utf-8", newline="") as fh:
        return [{k: float(v) for k, v in rec.items()} for rec in csv.DictReader(fh)]
