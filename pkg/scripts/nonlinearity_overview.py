"""Superfluid rows of the nonlinearity overview table (silica, d = 5 nm, mu = 0).

    python3 scripts/nonlinearity_overview.py
"""

import math

from thirdsound import Film, ModeIndex, oscillator_params, spring_constants


def one_sig(x):
    return f"{x:.0e}"


def main():
    print(f"{'R':>8} {'nu':>3} {'alpha (eff)':>18} {'x_zpf':>8} {'dOmega/2pi (eff)':>18} {'Omega_m/2pi':>12} {'m_eff':>8}")
    for R in (100e-9, 1e-6, 10e-6):
        for nu in (10, 1):
            film = Film.from_material("silica", R=R, d=5e-9)
            mode = ModeIndex(0, nu)
            s = spring_constants(film, mode)
            p = oscillator_params(film, mode, s)
            print(
                f"{R * 1e9:>6.0f}nm {nu:>3} {one_sig(s.alpha):>8} ({one_sig(s.alpha_eff)}) {one_sig(p.x_zpf):>8} "
                f"{one_sig(p.delta_omega_bare / (2 * math.pi)):>8} ({one_sig(p.delta_omega / (2 * math.pi))}) "
                f"{one_sig(p.omega_m / (2 * math.pi)):>12} {one_sig(p.m_eff):>8}"
            )


if __name__ == "__main__":
    main()
