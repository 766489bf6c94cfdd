"""Perturbative energy levels and transition frequencies of the anharmonic mode.

The cubic term is counted as half an order so that beta^2 (second order) and
alpha (first order) enter together, and the bookkeeping parameter is set to 1.
Levels are in joules, transitions in rad/s.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from thirdsound.springs import HBAR, OscillatorParams, SpringSet

VALIDITY_THRESHOLD = 1e-2


class PerturbationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class PerturbativeSpectrum:
    levels: np.ndarray
    transitions: np.ndarray
    beta_term: float
    alpha_term: float


def small_parameters(params: OscillatorParams, spring: SpringSet) -> tuple[float, float]:
    """(beta x^3 / hbar Omega, alpha x^4 / hbar Omega)."""
    e = HBAR * params.omega_m
    return spring.beta * params.x_zpf**3 / e, spring.alpha * params.x_zpf**4 / e


def perturbative_levels(params: OscillatorParams, spring: SpringSet, n_max: int) -> PerturbativeSpectrum:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    beta_term, alpha_term = small_parameters(params, spring)
    if max(abs(beta_term), abs(alpha_term)) > VALIDITY_THRESHOLD:
        warnings.warn(
            f"small parameters ({beta_term:.2e}, {alpha_term:.2e}) exceed {VALIDITY_THRESHOLD}; "
            "second-order perturbation theory is unreliable",
            PerturbationWarning,
            stacklevel=2,
        )
    n = np.arange(n_max + 1, dtype=float)
    e = HBAR * params.omega_m
    x = params.x_zpf
    levels = (
        e * (n + 0.5)
        + 1.5 * x**4 * spring.alpha * (n**2 + n + 0.5)
        - x**6 * spring.beta**2 / (9 * e) * (30 * n**2 + 30 * n + 11)
        - x**8 * spring.alpha**2 / (8 * e) * (34 * n**3 + 51 * n**2 + 59 * n + 21)
    )
    return PerturbativeSpectrum(
        levels=levels,
        transitions=np.diff(levels) / HBAR,
        beta_term=beta_term,
        alpha_term=alpha_term,
    )


def transition_energies(params: OscillatorParams, spring: SpringSet, n_max: int) -> np.ndarray:
    """E_{n+1} - E_n from the closed transition formula, n = 0..n_max-1 (joules)."""
    n = np.arange(n_max, dtype=float)
    e = HBAR * params.omega_m
    x = params.x_zpf
    return (
        e
        + 3 * (n + 1) * x**4 * (spring.alpha - (20.0 / 9.0) * x**2 * spring.beta**2 / e)
        - 3 * x**8 / (4 * e) * (24 + 17 * n * (n + 2)) * spring.alpha**2
    )


def transition_frequencies(params: OscillatorParams, n_max: int) -> np.ndarray:
    """Omega[n] = Omega_m + (n+1) delta_omega for n = 0..n_max-1."""
    n = np.arange(n_max, dtype=float)
    return params.omega_m + (n + 1) * params.delta_omega


def dropped_order_bound(params: OscillatorParams, spring: SpringSet, n_max: int) -> np.ndarray:
    """Size estimate (joules) of the first omitted terms in E_n, n = 0..n_max.

    The omitted orders are beta^4, beta^2 alpha (same order as the retained
    alpha^2) and alpha^3; their coefficients grow roughly as (n+1)^4.  A
    floating-point floor for a dense eigensolver is included.
    """
    b, a = small_parameters(params, spring)
    n = np.arange(n_max + 1, dtype=float)
    e = HBAR * params.omega_m
    analytic = 25.0 * (n + 1) ** 4 * (b**4 + b**2 * abs(a) + abs(a) ** 3) * e
    floor = 200 * np.finfo(float).eps * (n_max + 40) * e
    return analytic + floor
