"""Spring constants and oscillator parameters of a disk-confined superfluid film.

Normalization convention: the reference coordinate is the film displacement at
the rim, x = eta(R, theta=0).  Every spring constant, the effective mass and the
zero-point amplitude refer to that coordinate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from thirdsound.specfun import ModeIndex, angular_factor, bessel_j, bessel_jprime_zero, phi

HBAR = 1.054571817e-34  # J s
KB = 1.380649e-23  # J / K

# van der Waals coefficients in m^5 s^-2
MATERIALS = {
    "silica": {"a_vdw": 2.65e-24, "rho": 145.0, "rho_He": 145.0},
    "silicon": {"a_vdw": 3.5e-24, "rho": 145.0, "rho_He": 145.0},
}


class ValidityWarning(UserWarning):
    """Parameters outside the regime where the thin-film model is trusted."""


@dataclass(frozen=True)
class Film:
    R: float
    d: float
    a_vdw: float = MATERIALS["silica"]["a_vdw"]
    rho: float = 145.0
    rho_He: float = 145.0

    def __post_init__(self):
        for name in ("R", "d", "a_vdw", "rho", "rho_He"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be positive and finite, got {value}")
        if self.rho > self.rho_He:
            raise ValueError("superfluid density rho cannot exceed total density rho_He")
        for issue in self.validity_issues():
            warnings.warn(issue, ValidityWarning, stacklevel=3)

    @classmethod
    def from_material(cls, material: str, R: float, d: float, **overrides) -> "Film":
        params = dict(MATERIALS[material])
        params.update(overrides)
        return cls(R=R, d=d, **params)

    @property
    def rho_n(self) -> float:
        return self.rho_He - self.rho

    def validity_issues(self) -> list[str]:
        issues = []
        if self.d >= self.R:
            issues.append(f"d >= R ({self.d:.3g} m >= {self.R:.3g} m): outside thin-film validity")
        if not 1e-9 <= self.d <= 30e-9:
            issues.append(f"d = {self.d * 1e9:.3g} nm outside the 1-30 nm van der Waals regime")
        return issues


@dataclass(frozen=True)
class SpringSet:
    k: float
    beta: float
    alpha: float
    alpha_eff: float

    def replace(self, **changes) -> "SpringSet":
        values = {"k": self.k, "beta": self.beta, "alpha": self.alpha, "alpha_eff": self.alpha_eff}
        values.update(changes)
        return SpringSet(**values)


@dataclass(frozen=True)
class OscillatorParams:
    omega_m: float
    m_eff: float
    x_zpf: float
    delta_omega: float
    c3: float
    delta_omega_bare: float = field(default=float("nan"))


def _delta(mode: ModeIndex) -> float:
    return 1.0 if mode.mu == 0 else 0.0


def speed_of_sound(film: Film) -> float:
    """Lossless third-sound speed sqrt(3 a_vdw (rho/rho_He) / d^3)."""
    return math.sqrt(3.0 * film.a_vdw * (film.rho / film.rho_He) / film.d**3)


def spring_constants(film: Film, mode: ModeIndex) -> SpringSet:
    z = bessel_jprime_zero(mode)
    dl = _delta(mode)
    pa = film.rho * film.a_vdw * film.R**2
    k = (1 + dl) * 1.5 * math.pi * pa * (1 - mode.mu**2 / z**2) / film.d**4
    beta = -12 * math.pi * pa * phi(3, mode) / film.d**5 if mode.mu == 0 else 0.0
    alpha = (3 + 5 * dl) * 2.5 * math.pi * pa * phi(4, mode) / film.d**6
    return SpringSet(k=k, beta=beta, alpha=alpha, alpha_eff=alpha - (10.0 / 9.0) * beta**2 / k)


def spring_constants_quadrature(film: Film, mode: ModeIndex, rtol: float = 1e-10) -> SpringSet:
    """Brute-force route: integrate (eta/eta_rim)^p over the disk in 2-D."""
    z = bessel_jprime_zero(mode)
    R = film.R
    rim = bessel_j(mode.mu, z)

    def overlap(p):
        def f(theta, r):
            return (bessel_j(mode.mu, z * r / R) * math.cos(mode.mu * theta) / rim) ** p * r

        val, _ = integrate.dblquad(f, 0.0, R, 0.0, 2 * math.pi, epsabs=0.0, epsrel=rtol)
        return val

    pa = film.rho * film.a_vdw
    k = 3 * pa / film.d**4 * overlap(2)
    beta = -6 * pa / film.d**5 * overlap(3) if mode.mu == 0 else 0.0
    alpha = 10 * pa / film.d**6 * overlap(4)
    return SpringSet(k=k, beta=beta, alpha=alpha, alpha_eff=alpha - (10.0 / 9.0) * beta**2 / k)


def x_zpf_closed_form(film: Film, mode: ModeIndex) -> float:
    z = bessel_jprime_zero(mode)
    dl = _delta(mode)
    denom = (1 + dl) * math.pi * math.sqrt(3 * film.a_vdw) * math.sqrt(film.rho * film.rho_He) * (1 - mode.mu**2 / z**2)
    return math.sqrt(HBAR / denom) * math.sqrt(z) * film.d**1.25 / film.R**1.5


def delta_omega_closed_form(film: Film, mode: ModeIndex) -> float:
    """Single-phonon shift (with alpha_eff) expressed through R, d and mode numbers only."""
    z = bessel_jprime_zero(mode)
    dl = _delta(mode)
    shape = (phi(4, mode) - dl * (8.0 / 3.0) * (phi(3, mode) ** 2 if mode.mu == 0 else 0.0)) / (1 - mode.mu**2 / z**2) ** 2
    return 15 * HBAR / ((2 + dl) * math.pi * film.rho_He) * shape * z**2 / (film.R**4 * film.d)


def oscillator_params(film: Film, mode: ModeIndex, springs: SpringSet | None = None) -> OscillatorParams:
    springs = springs or spring_constants(film, mode)
    c3 = speed_of_sound(film)
    omega = bessel_jprime_zero(mode) * c3 / film.R
    m_eff = springs.k / omega**2
    x_zpf = math.sqrt(HBAR / (2 * m_eff * omega))
    return OscillatorParams(
        omega_m=omega,
        m_eff=m_eff,
        x_zpf=x_zpf,
        delta_omega=3 * x_zpf**4 * springs.alpha_eff / HBAR,
        c3=c3,
        delta_omega_bare=3 * x_zpf**4 * springs.alpha / HBAR,
    )


def effective_duffing_ratio(mode: ModeIndex) -> float:
    """alpha_eff / alpha, a function of the mode numbers alone."""
    if mode.mu != 0:
        return 1.0
    return 1.0 - (8.0 / 3.0) * phi(3, mode) ** 2 / phi(4, mode)


@dataclass(frozen=True)
class BlockadeReport:
    single_phonon_resolved: bool
    x_crit: float
    x_crit_eff: float
    zpf_exceeds_crit: bool
    zpf_exceeds_crit_eff: bool
    required_Q: float
    Qf_product: float


def blockade_report(params: OscillatorParams, spring: SpringSet, gamma: float) -> BlockadeReport:
    """Phonon-blockade criterion gamma < delta_omega and its critical-amplitude form.

    x_crit uses the bare alpha (classical Duffing bistability); x_crit_eff uses
    alpha_eff, for which x_zpf > x_crit_eff is exactly gamma < delta_omega.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    base = (2.0 / 3.0) * params.m_eff * gamma * params.omega_m
    x_crit = math.sqrt(base / spring.alpha)
    x_crit_eff = math.sqrt(base / spring.alpha_eff)
    required_Q = params.omega_m / params.delta_omega
    return BlockadeReport(
        single_phonon_resolved=gamma < params.delta_omega,
        x_crit=x_crit,
        x_crit_eff=x_crit_eff,
        zpf_exceeds_crit=params.x_zpf > x_crit,
        zpf_exceeds_crit_eff=params.x_zpf > x_crit_eff,
        required_Q=required_Q,
        Qf_product=required_Q * params.omega_m / (2 * math.pi),
    )


def thermal_occupation(energy: float, T: float) -> float:
    """Bose-Einstein occupation for an energy gap in joules; zero at T = 0."""
    if T < 0:
        raise ValueError("temperature must be non-negative")
    if T == 0:
        return 0.0
    if energy > 700 * KB * T:
        return 0.0
    return 1.0 / math.expm1(energy / (KB * T))


@dataclass(frozen=True)
class VelocityRatios:
    zpf_ratio: float
    thermal_ratio: float


def critical_velocity_ratios(film: Film, mode: ModeIndex, T: float) -> VelocityRatios:
    """Particle velocity over critical velocity, ground state and thermalized."""
    if T < 0:
        raise ValueError("temperature must be non-negative")
    params = oscillator_params(film, mode)
    zpf = (film.rho / film.rho_He) * params.x_zpf / film.d
    n_th = thermal_occupation(HBAR * params.omega_m, T)
    return VelocityRatios(zpf_ratio=zpf, thermal_ratio=zpf * math.sqrt(1 + 2 * n_th))


def areal_energy_density(film: Film, eta):
    """Energy per unit area of a local thickness excursion eta (|eta| < d)."""
    eta = np.asarray(eta, dtype=float)
    if np.any(np.abs(eta) >= film.d):
        raise ValueError("|eta| must be smaller than the film thickness")
    u = film.rho * film.a_vdw * (-eta / film.d**3 + 1.5 * eta**2 / film.d**4)
    return float(u) if u.ndim == 0 else u
