"""JSON run configuration for the evaluation pipeline."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .regression import DEFAULT_LOG_BASE

DEFAULT_REGION = {"lat_min": 25.0, "lat_max": 73.0, "lon_min": -30.0, "lon_max": 42.0}


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


def parse_utc(stamp: str) -> int:
    """ISO-8601 timestamp -> epoch seconds; naive stamps are taken as UTC."""
    text = re.sub("[Zz]$", "+00:00", stamp.strip())
    try:
        dt = datetime.fromisoformat(text)
    except ValueError as exc:
        raise ConfigError(f"cannot parse timestamp {stamp!r}") from exc
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


@dataclass
class DatasetEntry:
    id: str
    u_path: str
    v_path: str
    role: str = "candidate"
    ref_height_m: float = 10.0
    declared_points: int | None = None

    def __post_init__(self):
        if self.role not in ("reference", "candidate"):
            raise ConfigError(f"dataset {self.id!r}: role must be reference or "
                              f"candidate, got {self.role!r}")
        if not self.ref_height_m > 0:
            raise ConfigError(f"dataset {self.id!r}: ref_height_m must be positive")


@dataclass
class RunConfig:
    datasets: list[DatasetEntry]
    turbine_csv: str
    output_dir: str
    lat_min: float = DEFAULT_REGION["lat_min"]
    lat_max: float = DEFAULT_REGION["lat_max"]
    lon_min: float = DEFAULT_REGION["lon_min"]
    lon_max: float = DEFAULT_REGION["lon_max"]
    mask_path: str | None = None
    hub_height_m: float = 126.0
    alpha: float = 1.0 / 7.0
    kde_grid_size: int = 1024
    top_k: int = 100
    time_window: tuple[int, int] | None = None
    step_hours: float | None = None
    power_normalization: str = "per_point"
    log_base: str = DEFAULT_LOG_BASE
    base_dir: Path = field(default_factory=Path)

    def __post_init__(self):
        if self.kde_grid_size < 64:
            raise ConfigError(f"kde_grid_size must be >= 64, got {self.kde_grid_size}")
        if self.top_k < 1:
            raise ConfigError("top_k must be >= 1")
        if not (self.alpha > 0 and self.hub_height_m > 0):
            raise ConfigError("alpha and hub_height_m must be positive")
        if self.time_window is not None and self.time_window[0] >= self.time_window[1]:
            raise ConfigError("time_window must be a nonempty [start, end) interval")
        if self.power_normalization not in ("per_point", "total"):
            raise ConfigError("power_normalization must be per_point or total")
        refs = [d for d in self.datasets if d.role == "reference"]
        cands = [d for d in self.datasets if d.role == "candidate"]
        if len(refs) != 1:
            raise ConfigError(f"exactly one reference dataset required, got {len(refs)}")
        if not cands:
            raise ConfigError("at least one candidate dataset required")
        ids = [d.id for d in self.datasets]
        if len(set(ids)) != len(ids):
            raise ConfigError("dataset ids must be unique")
        for d in self.datasets:
            for p in (d.u_path, d.v_path):
                if not self.resolve(p).is_file():
                    raise ConfigError(f"dataset {d.id!r}: file not found: {p}")
        if self.mask_path is not None and not self.resolve(self.mask_path).is_file():
            raise ConfigError(f"mask file not found: {self.mask_path}")
        if not self.turbine_csv or not self.resolve(self.turbine_csv).is_file():
            raise ConfigError(f"turbine curve not found: {self.turbine_csv!r}")
        if not self.output_dir:
            raise ConfigError("output_dir is required")

    def resolve(self, path) -> Path:
        """Resolve a possibly relative path against the config file location."""
        p = Path(path)
        return p if p.is_absolute() else self.base_dir / p

    @property
    def reference(self) -> DatasetEntry:
        return next(d for d in self.datasets if d.role == "reference")

    @property
    def candidates(self) -> list[DatasetEntry]:
        return [d for d in self.datasets if d.role == "candidate"]


def load_config(path) -> RunConfig:
    """Load and validate a run configuration JSON document."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: config must be a JSON object")

    known = {"region", "mask_path", "hub_height_m", "alpha", "kde_grid_size",
             "top_k", "turbine_csv", "time_window", "step_hours", "output_dir",
             "power_normalization", "log_base", "datasets"}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"{path}: unknown config keys: {', '.join(sorted(unknown))}")

    region = dict(DEFAULT_REGION)
    region.update(doc.get("region") or {})
    window = None
    if doc.get("time_window") is not None:
        raw = doc["time_window"]
        if not (isinstance(raw, (list, tuple)) and len(raw) == 2):
            raise ConfigError("time_window must be [start, end)")
        window = (parse_utc(raw[0]), parse_utc(raw[1]))

    datasets = []
    for i, entry in enumerate(doc.get("datasets") or []):
        if not isinstance(entry, dict) or "id" not in entry:
            raise ConfigError(f"datasets[{i}]: each dataset needs at least an id")
        try:
            datasets.append(DatasetEntry(
                id=str(entry["id"]),
                u_path=str(entry["u_path"]),
                v_path=str(entry["v_path"]),
                role=str(entry.get("role", "candidate")),
                ref_height_m=float(entry.get("ref_height_m", 10.0)),
                declared_points=(None if entry.get("declared_points") is None
                                 else int(entry["declared_points"])),
            ))
        except KeyError as exc:
            raise ConfigError(f"datasets[{i}] ({entry.get('id')}): missing {exc}") from exc

    try:
        return RunConfig(
            datasets=datasets,
            turbine_csv=str(doc.get("turbine_csv", "")),
            output_dir=str(doc.get("output_dir", "")),
            lat_min=float(region["lat_min"]), lat_max=float(region["lat_max"]),
            lon_min=float(region["lon_min"]), lon_max=float(region["lon_max"]),
            mask_path=doc.get("mask_path"),
            hub_height_m=float(doc.get("hub_height_m", 126.0)),
            alpha=float(doc.get("alpha", 1.0 / 7.0)),
            kde_grid_size=int(doc.get("kde_grid_size", 1024)),
            top_k=int(doc.get("top_k", 100)),
            time_window=window,
            step_hours=(None if doc.get("step_hours") is None
                        else float(doc["step_hours"])),
            power_normalization=str(doc.get("power_normalization", "per_point")),
            log_base=str(doc.get("log_base", DEFAULT_LOG_BASE)),
            base_dir=path.parent,
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
