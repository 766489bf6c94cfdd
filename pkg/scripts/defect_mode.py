"""Phononic-crystal defect mode estimate (silicon, d = 11 nm, R = 56 nm, mode (0,1)).

    python3 scripts/defect_mode.py
"""

import math

from thirdsound import Film, ModeIndex, oscillator_params, spring_constants


def main():
    film = Film.from_material("silicon", R=56e-9, d=11e-9)
    mode = ModeIndex(0, 1)
    p = oscillator_params(film, mode, spring_constants(film, mode))
    f = p.omega_m / (2 * math.pi)
    print(f"Omega_m/2pi = {f:.4g} Hz")
    for label, dw in (("alpha_eff", p.delta_omega), ("bare alpha", p.delta_omega_bare)):
        print(f"{label:>10}: dOmega/2pi = {dw / (2 * math.pi):.3g} Hz, required Q = {p.omega_m / dw:.3g}")


if __name__ == "__main__":
    main()
