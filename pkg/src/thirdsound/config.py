"""Run configuration: plain-text ``key = value`` file with [section] headers.

Units at this boundary: lengths in nm, temperature in K, frequencies and
rates in Hz (cycles, not radians).  Spring-constant overrides are SI.

Example::

    [material]
    preset = silica

    [film]
    R_nm = 20
    d_nm = 5

    [mode]
    mu = 0
    nu = 1
    boundary = free

    [conditions]
    T_K = 0.05
    Q = 1e8

    [sweep]
    R_nm = 100, 10000, 25, log
"""

from __future__ import annotations

import dataclasses
import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from thirdsound.specfun import Boundary, ModeIndex
from thirdsound.springs import MATERIALS, Film


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration (CLI exit code 1)."""


SWEEPABLE = ("R_nm", "d_nm", "T_K", "Q", "gamma_Hz", "f_Hz", "mu", "nu", "a_vdw")
_INTEGER = ("mu", "nu")


@dataclass(frozen=True)
class SweepAxis:
    name: str
    start: float
    stop: float
    count: int
    scale: str = "linear"

    def __post_init__(self):
        if self.name not in SWEEPABLE:
            raise ConfigError(f"unknown sweep parameter '{self.name}' (choose from {', '.join(SWEEPABLE)})")
        if int(self.count) != self.count or self.count < 1:
            raise ConfigError(f"sweep '{self.name}': count must be a positive integer")
        if self.scale not in ("linear", "log"):
            raise ConfigError(f"sweep '{self.name}': scale must be 'linear' or 'log'")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ConfigError(f"sweep '{self.name}': bounds must be finite")
        if self.scale == "log" and (self.start <= 0 or self.stop <= 0):
            raise ConfigError(f"sweep '{self.name}': log axis needs positive bounds")

    def values(self) -> np.ndarray:
        if self.count == 1:
            vals = np.array([self.start])
        elif self.scale == "log":
            vals = np.geomspace(self.start, self.stop, self.count)
        else:
            vals = np.linspace(self.start, self.stop, self.count)
        if self.name in _INTEGER:
            vals = np.round(vals)
        return vals


@dataclass(frozen=True)
class RunConfig:
    preset: str | None = "silica"
    a_vdw: float | None = None
    rho: float | None = None
    rho_He: float | None = None
    R_nm: float = 20.0
    d_nm: float = 5.0
    mu: int = 0
    nu: int = 1
    boundary: str = "free"
    T_K: float = 0.05
    Q: float | None = 1e8
    gamma_Hz: float | None = None
    f_Hz: float | None = None
    sweep: tuple[SweepAxis, ...] = ()
    output: str | None = None
    table: str | None = None
    N: int = 120
    M: int = 15
    rtol: float = 1e-8
    alpha: float | None = None
    beta: float | None = None

    def validate(self) -> "RunConfig":
        if self.preset is not None and self.preset not in MATERIALS:
            raise ConfigError(f"unknown preset '{self.preset}' (choose from {', '.join(MATERIALS)})")
        if self.preset is None and None in (self.a_vdw, self.rho, self.rho_He):
            raise ConfigError("without a preset, a_vdw, rho and rho_He must all be given")
        if (self.Q is None) == (self.gamma_Hz is None):
            raise ConfigError("exactly one of Q or gamma_Hz must be given")
        for name in ("R_nm", "d_nm", "Q", "gamma_Hz", "f_Hz", "a_vdw", "rho", "rho_He", "rtol"):
            v = getattr(self, name)
            if v is not None and not (math.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be positive and finite, got {v}")
        if not (math.isfinite(self.T_K) and self.T_K >= 0):
            raise ConfigError(f"T_K must be non-negative, got {self.T_K}")
        try:
            Boundary.parse(self.boundary)
            ModeIndex(self.mu, self.nu, self.boundary)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.N < 8 or self.M < 2:
            raise ConfigError("solver needs N >= 8 and M >= 2")
        names = [a.name for a in self.sweep]
        if len(set(names)) != len(names):
            raise ConfigError("each parameter may be swept at most once")
        for a in self.sweep:
            if a.name == "Q" and self.Q is None or a.name == "gamma_Hz" and self.gamma_Hz is None:
                raise ConfigError(f"cannot sweep {a.name}: the config specifies the other damping parameter")
        return self

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)

    # physical objects -------------------------------------------------

    def material(self) -> dict:
        base = dict(MATERIALS[self.preset]) if self.preset else {}
        for name in ("a_vdw", "rho", "rho_He"):
            if getattr(self, name) is not None:
                base[name] = getattr(self, name)
        return base

    def film(self) -> Film:
        return Film(R=self.R_nm * 1e-9, d=self.d_nm * 1e-9, **self.material())

    def mode(self) -> ModeIndex:
        return ModeIndex(int(self.mu), int(self.nu), Boundary.parse(self.boundary))

    def gamma(self, omega_m: float) -> float:
        """Energy damping rate in rad/s."""
        return omega_m / self.Q if self.Q is not None else 2 * math.pi * self.gamma_Hz

    def points(self) -> list["RunConfig"]:
        """Sweep points in row-major order (first axis varies slowest)."""
        if not self.sweep:
            return [self.replace(sweep=())]
        grids = [axis.values() for axis in self.sweep]
        out = []
        for idx in np.ndindex(*[len(g) for g in grids]):
            changes = {}
            for axis, g, i in zip(self.sweep, grids, idx):
                v = float(g[i])
                changes[axis.name] = int(v) if axis.name in _INTEGER else v
            out.append(self.replace(sweep=(), **changes))
        return out

    def digest(self) -> str:
        """Provenance hash of the physics inputs (the output path is excluded)."""
        return hashlib.sha256(serialize(self.replace(output=None)).encode()).hexdigest()[:16]


_LAYOUT = {
    "material": ("preset", "a_vdw", "rho", "rho_He"),
    "film": ("R_nm", "d_nm"),
    "mode": ("mu", "nu", "boundary"),
    "conditions": ("T_K", "Q", "gamma_Hz", "f_Hz"),
    "override": ("alpha", "beta"),
    "solver": ("N", "M", "rtol"),
    "output": ("output", "table"),
}
_STR = {"preset", "boundary", "output", "table"}
_INT = {"mu", "nu", "N", "M"}


def _coerce(key: str, text: str, where: str):
    if key in _STR:
        return text
    try:
        if key in _INT:
            value = float(text)
            if value != int(value):
                raise ValueError
            return int(value)
        return float(text)
    except ValueError:
        raise ConfigError(f"{where}: cannot parse '{text}' as {'an integer' if key in _INT else 'a number'} for {key}") from None


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    values: dict = {}
    explicit: set[str] = set()
    axes = []
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in _LAYOUT and section != "sweep":
                raise ConfigError(f"{where}: unknown section [{section}]")
            continue
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        if section is None:
            raise ConfigError(f"{where}: '{key}' appears before any [section]")
        if section == "sweep":
            parts = [p.strip() for p in val.split(",")]
            if len(parts) not in (3, 4):
                raise ConfigError(f"{where}: sweep needs 'min, max, count[, linear|log]'")
            try:
                lo, hi, n = float(parts[0]), float(parts[1]), float(parts[2])
            except ValueError:
                raise ConfigError(f"{where}: non-numeric sweep bounds") from None
            if n != int(n):
                raise ConfigError(f"{where}: sweep count must be an integer")
            try:
                axes.append(SweepAxis(key, lo, hi, int(n), parts[3] if len(parts) == 4 else "linear"))
            except ConfigError as exc:
                raise ConfigError(f"{where}: {exc}") from None
            continue
        if key not in _LAYOUT[section]:
            raise ConfigError(f"{where}: unknown key '{key}' in [{section}]")
        if key in explicit:
            raise ConfigError(f"{where}: duplicate key '{key}'")
        explicit.add(key)
        if val.lower() == "none":
            values[key] = None
        else:
            values[key] = _coerce(key, val, where)
    if "gamma_Hz" in explicit and values.get("gamma_Hz") is not None and "Q" not in explicit:
        values["Q"] = None
    if "preset" not in explicit and {"a_vdw", "rho", "rho_He"} <= explicit:
        values["preset"] = None
    return RunConfig(sweep=tuple(axes), **values).validate()


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize(cfg: RunConfig) -> str:
    lines = []
    for section, keys in _LAYOUT.items():
        lines.append(f"[{section}]")
        for key in keys:
            lines.append(f"{key} = {_fmt(getattr(cfg, key))}")
        lines.append("")
    lines.append("[sweep]")
    for a in cfg.sweep:
        lines.append(f"{a.name} = {a.start!r}, {a.stop!r}, {a.count}, {a.scale}")
    return "\n".join(lines) + "\n"


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, str(path))
