"""Declarative single-point and swept evaluation, CSV output and figure presets."""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .core import (
    BellParity,
    EnergyBreakdown,
    PairGeometry,
    ResonanceError,
    as_vector,
    check_frequency,
)
from .mirror import total_energy, total_energy_via_image
from .spectral import spectral_breakdown

CONFIGURATIONS = ("perpendicular", "parallel", "general")
EVALUATORS = ("closed_form", "image", "spectral")
SCALES = ("linear", "log")
CSV_HEADER = ("swept", "sep", "z", "image_dist", "dE_free", "dE_boundary", "dE_total", "ratio")

# Parameters shared by every figure preset
OMEGA0_RB = 4.17
MU = 1.024e-3
NEAR_RANGE = (5e-3, 5e-2)
FAR_RANGE = (2.5e-2, 6.5)
Z_LIST = (2.0e-2, 2.5e-2, 3.5e-2)
FAR_Z_LIST = (2.5e-2, 5.5)


class ConfigError(ResonanceError, ValueError):
    pass


class SweepPointError(ResonanceError):
    """A sweep point failed; carries the swept value."""

    def __init__(self, variable, value, cause):
        super().__init__(f"evaluation failed at {variable}={value!r}: {cause}")
        self.variable = variable
        self.value = value
        self.cause = cause


class UnknownPreset(ConfigError):
    pass


def _sep_name(configuration: str) -> str:
    return "D" if configuration == "parallel" else "L"


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    points: int
    scale: str = "linear"

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.logspace(math.log10(self.start), math.log10(self.stop), self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class SweepConfig:
    """Everything needed to evaluate one point or one sweep.

    ``fixed`` holds the non-swept geometry and frequency values keyed by
    ``L``/``D``, ``z`` and ``omega0``.  For the general configuration atom A
    sits at (0, 0, z) and B at A + L * direction.
    """

    configuration: str
    omega0: float
    dipole_a: tuple
    dipole_b: tuple
    parity: str = "symmetric"
    fixed: dict = field(default_factory=dict)
    sweep: Optional[SweepSpec] = None
    evaluator: str = "closed_form"
    direction: tuple = (1.0, 0.0, 1.0)
    output: Optional[str] = None
    label: str = ""
    notes: str = ""

    def __post_init__(self):
        object.__setattr__(self, "dipole_a", tuple(float(c) for c in self.dipole_a))
        object.__setattr__(self, "dipole_b", tuple(float(c) for c in self.dipole_b))
        object.__setattr__(self, "direction", tuple(float(c) for c in self.direction))
        object.__setattr__(self, "fixed", {k: float(v) for k, v in self.fixed.items()})

    @property
    def sep_name(self) -> str:
        return _sep_name(self.configuration)

    def validate(self, need_sweep: bool = False) -> "SweepConfig":
        if self.configuration not in CONFIGURATIONS:
            raise ConfigError(f"configuration must be one of {CONFIGURATIONS}")
        if self.evaluator not in EVALUATORS:
            raise ConfigError(f"evaluator must be one of {EVALUATORS}")
        if self.evaluator == "spectral" and self.configuration == "general":
            raise ConfigError("spectral evaluator needs a perpendicular or parallel configuration")
        try:
            as_vector(self.dipole_a)
            as_vector(self.dipole_b)
            BellParity.parse(self.parity)
            check_frequency(self.fixed.get("omega0", self.omega0), allow_static=False)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        allowed = {self.sep_name, "z", "omega0"}
        unknown = set(self.fixed) - allowed
        if unknown:
            raise ConfigError(f"unknown fixed parameters {sorted(unknown)} for "
                              f"{self.configuration} configuration (allowed {sorted(allowed)})")
        if need_sweep and self.sweep is None:
            raise ConfigError("a sweep specification is required")
        needed = {self.sep_name, "z"}
        if self.sweep is not None:
            s = self.sweep
            if s.variable not in allowed:
                raise ConfigError(f"sweep variable must be one of {sorted(allowed)}, got {s.variable!r}")
            if s.variable in self.fixed:
                raise ConfigError(f"sweep variable {s.variable!r} also given as a fixed parameter")
            if not s.start < s.stop:
                raise ConfigError("sweep start must be below stop")
            if s.points < 2:
                raise ConfigError("a sweep needs at least two points")
            if s.scale not in SCALES:
                raise ConfigError(f"scale must be one of {SCALES}")
            if s.scale == "log" and s.start <= 0:
                raise ConfigError("log sweep needs a positive start")
            needed.discard(s.variable)
        missing = needed - set(self.fixed)
        if missing:
            raise ConfigError(f"missing fixed parameters {sorted(missing)}")
        if self.configuration == "general" and not np.linalg.norm(self.direction) > 0:
            raise ConfigError("general configuration needs a nonzero direction")
        return self

    def point_params(self, value: Optional[float] = None) -> dict:
        params = {"omega0": self.omega0, **self.fixed}
        if self.sweep is not None and value is not None:
            params[self.sweep.variable] = float(value)
        return params

    def geometry(self, params: dict) -> PairGeometry:
        sep, z = params[self.sep_name], params["z"]
        if self.configuration == "perpendicular":
            return PairGeometry.perpendicular(sep, z)
        if self.configuration == "parallel":
            return PairGeometry.parallel(sep, z)
        u = as_vector(self.direction)
        u = u / np.linalg.norm(u)
        a = np.array([0.0, 0.0, z])
        return PairGeometry(a, a + sep * u)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        data = dict(data)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields {sorted(unknown)}")
        sweep = data.pop("sweep", None)
        try:
            if sweep is not None:
                sweep = SweepSpec(variable=sweep["variable"], start=float(sweep["start"]),
                                  stop=float(sweep["stop"]), points=int(sweep["points"]),
                                  scale=sweep.get("scale", "linear"))
            return cls(sweep=sweep, **data)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed config: {exc}") from None

    def replace(self, **changes) -> "SweepConfig":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class SweepRow:
    swept: float
    sep: float
    z: float
    image_dist: float
    dE_free: float
    dE_boundary: float
    dE_total: float
    ratio: Optional[float]

    def as_csv_fields(self) -> list[str]:
        values = dataclasses.astuple(self)
        return ["" if v is None else format(v, ".17g") for v in values]


def evaluate(config: SweepConfig, params: dict) -> EnergyBreakdown:
    geometry = config.geometry(params)
    omega0 = params["omega0"]
    parity = BellParity.parse(config.parity)
    a, b = config.dipole_a, config.dipole_b
    if config.evaluator == "closed_form":
        return total_energy(a, b, omega0, geometry, parity)
    if config.evaluator == "image":
        return total_energy_via_image(a, b, omega0, geometry, parity)
    breakdown, _ = spectral_breakdown(a, b, omega0, geometry, parity)
    return breakdown


def _row(config: SweepConfig, params: dict, swept: float) -> SweepRow:
    e = evaluate(config, params)
    geometry = config.geometry(params)
    ratio = e.total / e.free_space if e.free_space != 0.0 else None
    return SweepRow(swept=float(swept), sep=params[config.sep_name], z=params["z"],
                    image_dist=geometry.image_distance, dE_free=float(e.free_space),
                    dE_boundary=float(e.boundary), dE_total=float(e.total), ratio=ratio)


def run_point(config: SweepConfig) -> SweepRow:
    """Evaluate the configuration at its fixed parameters (any sweep is ignored)."""
    config = config.replace(sweep=None).validate()
    params = config.point_params()
    return _row(config, params, params[config.sep_name])


def _sweep_point(args):
    config, value = args
    try:
        return _row(config, config.point_params(value), value)
    except ResonanceError as exc:
        raise SweepPointError(config.sweep.variable, float(value), exc) from exc
    except ValueError as exc:
        raise SweepPointError(config.sweep.variable, float(value), exc) from exc


def run_sweep(config: SweepConfig, workers: int = 1) -> list[SweepRow]:
    """Evaluate every sweep point (in order) and write the CSV if ``output`` is set."""
    config.validate(need_sweep=True)
    tasks = [(config, v) for v in config.sweep.values()]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]
    if config.output:
        write_csv(config.output, rows)
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.as_csv_fields())
    return buf.getvalue()


def write_csv(path, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv(rows))
    return path


def read_csv(path) -> list[SweepRow]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header}")
        return [SweepRow(*(float(v) for v in rec[:-1]), float(rec[-1]) if rec[-1] else None)
                for rec in reader]


def sidecar(config: SweepConfig, extra: Optional[dict] = None) -> dict:
    meta = {
        "library": "resonance_mirror",
        "version": __version__,
        "config": config.to_dict(),
        "evaluator": config.evaluator,
        "csv_header": list(CSV_HEADER),
        "float_format": ".17g",
        "tolerances": {"closed_form_vs_image_rel": 1e-12, "axis_closed_form_rel": 1e-14,
                       "spectral_rel": 1e-2, "alignment": 1e-12},
    }
    if extra:
        meta.update(extra)
    return meta


def write_sidecar(path, meta: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


# -- figure presets -------------------------------------------------------------

_X = (MU, 0.0, 0.0)
_Y = (0.0, MU, 0.0)
_Z = (0.0, 0.0, MU)

PRESET_DESCRIPTIONS = {
    "fig2": "omega0=4.17 eV, z_A=2e-2 eV^-1, mu_x=mu_z=1.024e-3 eV^-1; ratio dE/dE0 vs L, near zone",
    "fig3a": "x dipoles, omega0=4.17 eV, z_A in {2.0, 2.5, 3.5}e-2 eV^-1, near zone",
    "fig3bc": "x dipoles, far zone; z_A from ~2.5e-2 to ~5.5 eV^-1",
    "fig6": "parallel pair, x dipoles, z in {2.0, 2.5, 3.5}e-2 eV^-1, near zone",
    "fig7c": "parallel pair, x dipoles, far zone, 2.5e-2 <= D <= 6.5 eV^-2 (unit as printed)",
    "fig8": "parallel pair, mu_A along y, mu_B along z, near zone",
    "fig9": "parallel pair, mu_A along y, mu_B along z, far zone",
    "fig10": "parallel pair, z=2.5e-2 eV^-1, (x,x) vs (y,z) dipoles, near zone",
}

PRESETS = tuple(PRESET_DESCRIPTIONS)


def _preset(configuration, a, b, z, rng, label, points, notes=""):
    sep = _sep_name(configuration)
    return SweepConfig(configuration=configuration, omega0=OMEGA0_RB, dipole_a=a, dipole_b=b,
                       fixed={"z": z}, sweep=SweepSpec(sep, rng[0], rng[1], points),
                       label=label, notes=notes)


def figure_preset(name: str, near_points: int = 200, far_points: int = 1200) -> list[SweepConfig]:
    """Sweep configurations reproducing one figure's curves (data only)."""
    if name not in PRESET_DESCRIPTIONS:
        raise UnknownPreset(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    n, f = near_points, far_points
    if name == "fig2":
        return [_preset("perpendicular", _Z, _Z, 2e-2, NEAR_RANGE, "z_dipoles", n),
                _preset("perpendicular", _X, _X, 2e-2, NEAR_RANGE, "x_dipoles", n)]
    if name == "fig3a":
        return [_preset("perpendicular", _X, _X, z, NEAR_RANGE, f"z{z:g}", n) for z in Z_LIST]
    if name == "fig3bc":
        return [_preset("perpendicular", _X, _X, z, FAR_RANGE, f"z{z:g}", f,
                        notes="L range borrowed from the parallel far-zone preset")
                for z in FAR_Z_LIST]
    if name == "fig6":
        return [_preset("parallel", _X, _X, z, NEAR_RANGE, f"z{z:g}", n) for z in Z_LIST]
    if name == "fig7c":
        return [_preset("parallel", _X, _X, z, FAR_RANGE, f"z{z:g}", f,
                        notes="range labelled eV^-2 as printed; used as eV^-1")
                for z in FAR_Z_LIST]
    if name == "fig8":
        return [_preset("parallel", _Y, _Z, z, NEAR_RANGE, f"z{z:g}", n) for z in Z_LIST]
    if name == "fig9":
        return [_preset("parallel", _Y, _Z, z, FAR_RANGE, f"z{z:g}", f) for z in Z_LIST]
    return [_preset("parallel", _X, _X, 2.5e-2, NEAR_RANGE, "xx", n),
            _preset("parallel", _Y, _Z, 2.5e-2, NEAR_RANGE, "yz", n)]


def run_figure(name: str, outdir=None, evaluator: str = "closed_form",
               workers: int = 1) -> dict[str, list[SweepRow]]:
    """Run every curve of a preset; with ``outdir`` write ``<name>_<label>.csv``
    files and a ``<name>.json`` sidecar."""
    configs = figure_preset(name)
    results, files = {}, []
    for cfg in configs:
        cfg = cfg.replace(evaluator=evaluator)
        if outdir is not None:
            cfg = cfg.replace(output=str(Path(outdir) / f"{name}_{cfg.label}.csv"))
            files.append(Path(cfg.output).name)
        results[cfg.label] = run_sweep(cfg, workers=workers)
    if outdir is not None:
        meta = sidecar(configs[0].replace(evaluator=evaluator), {
            "preset": name,
            "description": PRESET_DESCRIPTIONS[name],
            "curves": [c.replace(evaluator=evaluator).to_dict() for c in configs],
            "files": files,
        })
        meta.pop("config")
        write_sidecar(Path(outdir) / f"{name}.json", meta)
    return results
