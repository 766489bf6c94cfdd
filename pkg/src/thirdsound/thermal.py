"""Thermal (evaporation-condensation) damping of third sound.

Complex third-sound speed in Atkins' plane-wave model:

    c3^2 = rho f d / rho_He
           + (rho S T / rho_He) [(S - beta_vap/rho_He) - i K f / (rho_He Omega)]
             / (C - i K L / (rho_He Omega d))

with f = 3 a_vdw / d^4 the van der Waals force per unit mass at the film
surface.  The thermal bracket is divided by the complex heat capacity alone,
which keeps every term in m^2/s^2 and reduces to the lossless speed when K and
S vanish.  Q = Re(c3) / (2 |Im(c3)|).

The formula as written is in the exp(+i Omega t) convention, where damping
shows up as Im(c3^2) > 0.  Results are reported in the exp(-i Omega t)
convention (complex conjugate), so a damped wave always has Im(c3) <= 0.

For films below about 1.5 nm the evaporation-flux term outweighs the
complex-heat-capacity term and the two contribute to Im(c3^2) with opposite
signs; the damping is then reported through |Im(c3)|, keeping Im(c3) <= 0.
"""

from __future__ import annotations

import bisect
import csv
import math
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from thirdsound.springs import Film, ValidityWarning

HEADER = "# helium-properties v1"
COLUMNS = ("T", "S", "C", "L", "beta_vap", "K", "viscosity_n", "rho_ratio")


class PropertyTableError(ValueError):
    pass


@dataclass(frozen=True)
class HeliumProperties:
    T: float
    S: float
    C: float
    L: float
    beta_vap: float
    K: float
    viscosity_n: float
    rho_ratio: float


class PropertyTable:
    """Immutable temperature-indexed table with linear interpolation."""

    def __init__(self, rows: list[HeliumProperties], source: str = "<memory>"):
        if len(rows) < 2:
            raise PropertyTableError(f"{source}: need at least two rows")
        temps = [r.T for r in rows]
        if any(b <= a for a, b in zip(temps, temps[1:])):
            raise PropertyTableError(f"{source}: temperatures must be strictly increasing")
        for r in rows:
            for name in COLUMNS:
                if not getattr(r, name) > 0:
                    raise PropertyTableError(f"{source}: non-positive {name} at T={r.T}")
        self.rows = tuple(rows)
        self.source = source
        self._T = np.array(temps)
        self._data = {name: np.array([getattr(r, name) for r in rows]) for name in COLUMNS}

    @property
    def t_min(self) -> float:
        return float(self._T[0])

    @property
    def t_max(self) -> float:
        return float(self._T[-1])

    def __len__(self):
        return len(self.rows)

    def at(self, T: float) -> HeliumProperties:
        if not self.t_min <= T <= self.t_max:
            raise PropertyTableError(f"T={T} K outside table range [{self.t_min}, {self.t_max}] K")
        i = bisect.bisect_left(self._T, T)
        if i < len(self._T) and self._T[i] == T:
            return self.rows[i]
        lo, hi = self.rows[i - 1], self.rows[i]
        w = (T - lo.T) / (hi.T - lo.T)
        return HeliumProperties(**{name: (1 - w) * getattr(lo, name) + w * getattr(hi, name) for name in COLUMNS})


def _parse(lines, source: str) -> PropertyTable:
    lines = list(lines)
    if not lines or lines[0].strip() != HEADER:
        raise PropertyTableError(f"{source}: first line must be '{HEADER}'")
    header = None
    rows = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in next(csv.reader([line]))]
        if header is None:
            missing = [c for c in COLUMNS if c not in fields]
            if missing:
                raise PropertyTableError(f"{source}: missing columns {missing}")
            header = fields
            continue
        if len(fields) != len(header):
            raise PropertyTableError(f"{source}: line {lineno}: expected {len(header)} fields, got {len(fields)}")
        try:
            values = dict(zip(header, map(float, fields)))
        except ValueError as exc:
            raise PropertyTableError(f"{source}: line {lineno}: {exc}") from None
        rows.append(HeliumProperties(**{c: values[c] for c in COLUMNS}))
    if header is None:
        raise PropertyTableError(f"{source}: no column header")
    return PropertyTable(rows, source)


def load_properties(path: str | Path | None = None) -> PropertyTable:
    """Load a property table; ``None`` loads the bundled 0.1-1.0 K table."""
    if path is None:
        text = resources.files("thirdsound.data").joinpath("helium_properties_v1.csv").read_text()
        return _parse(text.splitlines(), "bundled helium_properties_v1.csv")
    path = Path(path)
    return _parse(path.read_text().splitlines(), str(path))


_BUNDLED: PropertyTable | None = None


def bundled_properties() -> PropertyTable:
    global _BUNDLED
    if _BUNDLED is None:
        _BUNDLED = load_properties()
    return _BUNDLED


def complex_third_sound_speed(props: HeliumProperties, film: Film, omega: float) -> complex:
    if not omega > 0:
        raise ValueError("omega must be positive")
    rho_He = film.rho_He
    rho = props.rho_ratio * rho_He
    d = film.d
    f = 3 * film.a_vdw / d**4
    thermal = (rho * props.S * props.T / rho_He) * (
        (props.S - props.beta_vap / rho_He) - 1j * props.K * f / (rho_He * omega)
    ) / (props.C - 1j * props.K * props.L / (rho_He * omega * d))
    c2 = rho * f * d / rho_He + thermal
    c = complex(np.sqrt(c2))
    return complex(abs(c.real), -abs(c.imag))


@dataclass(frozen=True)
class ThermalResult:
    c3_complex: complex
    Q: float
    penetration_depth: float
    clamped: bool


def penetration_depth(props: HeliumProperties, film: Film, omega: float) -> float:
    rho_n = (1 - props.rho_ratio) * film.rho_He
    return math.sqrt(2 * props.viscosity_n / (omega * rho_n))


def thermal_quality_factor(props: HeliumProperties, film: Film, omega: float) -> ThermalResult:
    c = complex_third_sound_speed(props, film, omega)
    Q = math.inf if c.imag == 0 else c.real / (2 * abs(c.imag))
    dp = penetration_depth(props, film, omega)
    clamped = dp > film.d
    if not clamped:
        warnings.warn(
            f"normal-fluid penetration depth {dp:.3g} m below film thickness; normal fluid not clamped",
            ValidityWarning,
            stacklevel=2,
        )
    return ThermalResult(c3_complex=c, Q=Q, penetration_depth=dp, clamped=clamped)


def thermal_q_surface(film: Film, T_grid, omega_grid, table: PropertyTable | None = None) -> np.ndarray:
    """Q on the Cartesian grid, shape (len(T_grid), len(omega_grid))."""
    table = table or bundled_properties()
    T_grid = np.atleast_1d(np.asarray(T_grid, dtype=float))
    omega_grid = np.atleast_1d(np.asarray(omega_grid, dtype=float))
    out = np.empty((len(T_grid), len(omega_grid)))
    for i, T in enumerate(T_grid):
        props = table.at(float(T))
        for j, w in enumerate(omega_grid):
            out[i, j] = thermal_quality_factor(props, film, float(w)).Q
    return out
