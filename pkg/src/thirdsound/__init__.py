"""Nonlinear mechanics of circularly confined superfluid-helium third-sound resonators."""

from thirdsound.specfun import Boundary, ModeIndex, bessel_j, bessel_jprime_zero, phi
from thirdsound.springs import (
    HBAR,
    KB,
    MATERIALS,
    Film,
    OscillatorParams,
    SpringSet,
    oscillator_params,
    spring_constants,
)

__all__ = [
    "Boundary",
    "ModeIndex",
    "bessel_j",
    "bessel_jprime_zero",
    "phi",
    "HBAR",
    "KB",
    "MATERIALS",
    "Film",
    "OscillatorParams",
    "SpringSet",
    "oscillator_params",
    "spring_constants",
]
