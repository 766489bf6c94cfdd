"""Generate the bundled helium property table (0.1-1.0 K, saturated vapour pressure).

Provenance of each column:
  S, C, rho_ratio : Landau two-fluid model, phonon branch (c1 = 238.3 m/s) plus
                    Boltzmann rotons (Delta/kB = 8.71 K, p0/hbar = 1.92 1/A,
                    mu = 0.16 m_He4), the low-temperature parametrization
                    tabulated by Donnelly & Barenghi (1998).
  L               : latent heat (L0 + 5/2 kB T) / m_He4 with L0/kB = 7.17 K.
  beta_vap        : dP/dT of the ideal-vapour pressure over the liquid,
                    P = (m kB T / 2 pi hbar^2)^(3/2) kB T exp(-L0 / kB T)
                    (16 Pa at 1.0 K, matching the ITS-90 helium-4 scale).
  K               : Hertz-Knudsen evaporation mass flux per kelvin,
                    beta_vap * sqrt(m / 2 pi kB T), unit condensation coefficient.
  viscosity_n     : 1.3e-6 + 2.0e-8 T^-5 Pa s, a rough interpolation of the
                    roton plateau and the phonon rise below 0.6 K.
All columns are SI.  Run:  python3 scripts/build_helium_table.py
"""

import math
from pathlib import Path

import numpy as np

HBAR = 1.054571817e-34
KB = 1.380649e-23
M4 = 6.6464731e-27
RHO = 145.1
C1 = 238.3
DELTA = 8.71 * KB
P0 = 1.92e10 * HBAR
MU = 0.16 * M4
L0 = 7.17 * KB

OUT = Path(__file__).resolve().parents[1] / "src" / "thirdsound" / "data" / "helium_properties_v1.csv"


def properties(T):
    beta = 1.0 / (KB * T)
    s_ph = 2 * math.pi**2 * KB**4 * T**3 / (45 * HBAR**3 * C1**3)
    rn_ph = 2 * math.pi**2 * (KB * T) ** 4 / (45 * HBAR**3 * C1**5)
    n_r = 2 * P0**2 * math.sqrt(MU * KB * T) * math.exp(-DELTA * beta) / ((2 * math.pi) ** 1.5 * HBAR**3)
    x = DELTA * beta
    s_r = n_r * KB * (1.5 + x)
    c_r = n_r * KB * (0.75 + x + x * x)
    rn_r = P0**2 * n_r * beta / 3
    P = (M4 * KB * T / (2 * math.pi * HBAR**2)) ** 1.5 * KB * T * math.exp(-L0 * beta)
    beta_vap = P * (2.5 / T + L0 / (KB * T**2))
    return {
        "T": T,
        "S": (s_ph + s_r) / RHO,
        "C": (3 * s_ph + c_r) / RHO,
        "L": (L0 + 2.5 * KB * T) / M4,
        "beta_vap": beta_vap,
        "K": beta_vap * math.sqrt(M4 / (2 * math.pi * KB * T)),
        "viscosity_n": 1.3e-6 + 2.0e-8 * T**-5,
        "rho_ratio": 1 - (rn_ph + rn_r) / RHO,
    }


def main():
    cols = ["T", "S", "C", "L", "beta_vap", "K", "viscosity_n", "rho_ratio"]
    lines = [
        "# helium-properties v1",
        "# Liquid helium-4 at saturated vapour pressure, SI units:",
        "# T [K], S [J/kg/K], C [J/kg/K], L [J/kg], beta_vap [Pa/K], K [kg/m^2/s/K], viscosity_n [Pa s], rho_ratio [-]",
        "# Generated by scripts/build_helium_table.py; see that file for the provenance of every column.",
        ",".join(cols),
    ]
    for T in np.round(np.arange(0.100, 1.0005, 0.001), 3):
        row = properties(float(T))
        lines.append(",".join(f"{row[c]:.10g}" for c in cols))
    OUT.write_text("\n".join(lines) + "\n")
    print(f"wrote {OUT} ({len(lines) - 5} rows)")


if __name__ == "__main__":
    main()
