"""Thermal-dissipation Q over temperature and frequency for an 11 nm film, plus Q(T) at 30 MHz.

    python3 scripts/thermal_surface.py
"""

import math
import warnings

import numpy as np

from thirdsound.springs import Film, ValidityWarning
from thirdsound.thermal import bundled_properties, thermal_q_surface


def main():
    warnings.simplefilter("ignore", ValidityWarning)
    film = Film.from_material("silica", R=1e-6, d=11e-9)
    T = np.round(np.arange(0.3, 1.001, 0.1), 3)
    f = np.array([1e6, 5e6, 10e6, 30e6, 50e6])
    Q = thermal_q_surface(film, T, 2 * math.pi * f, bundled_properties())
    print("T [K] \\ f [MHz] " + " ".join(f"{x / 1e6:>9.0f}" for x in f))
    for t, row in zip(T, Q):
        print(f"{t:>15.2f} " + " ".join(f"{q:>9.2e}" for q in row))

    T_fine = np.linspace(0.3, 1.0, 71)
    q30 = thermal_q_surface(film, T_fine, [2 * math.pi * 30e6])[:, 0]
    slope = np.gradient(np.log(q30), np.log(T_fine))
    print("\nlocal d ln Q / d ln T at 30 MHz:")
    for t, s in zip(T_fine[::10], slope[::10]):
        print(f"  T = {t:.2f} K: {s:7.2f}")


if __name__ == "__main__":
    main()
