"""Open-system spectra in the blockade regime: full (alpha, beta), alpha_eff and bare Duffing.

    python3 scripts/blockade_spectra.py [--Q 1e8] [--T 0.05] [--out spectra.csv]

Prints peak positions relative to Omega_m in units of Gamma and compares the
spacings with delta_omega.  Writes the three spectra as CSV when --out is given.
"""

import argparse
import math
import time

import numpy as np

from thirdsound import Film, ModeIndex
from thirdsound.lindblad import fig4_comparison


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--R", type=float, default=20.0, help="radius in nm")
    ap.add_argument("--d", type=float, default=5.0, help="film thickness in nm")
    ap.add_argument("--Q", type=float, default=1e8)
    ap.add_argument("--T", type=float, default=0.05, help="temperature in K")
    ap.add_argument("--N", type=int, default=120)
    ap.add_argument("--M", type=int, default=15)
    ap.add_argument("--out")
    args = ap.parse_args()

    t0 = time.perf_counter()
    film = Film.from_material("silica", R=args.R * 1e-9, d=args.d * 1e-9)
    comp = fig4_comparison(film, ModeIndex(0, 1), args.T, args.Q, N=args.N, M=args.M)
    p, g = comp.params, comp.gamma
    print(f"Omega_m/2pi = {p.omega_m / 2 / math.pi:.6g} Hz, Gamma/2pi = {g / 2 / math.pi:.4g} Hz")
    print(f"delta_omega/Gamma: alpha_eff {p.delta_omega / g:.3f}, bare alpha {p.delta_omega_bare / g:.3f}")
    for name in ("full", "eff", "duffing"):
        res = getattr(comp, name)
        rel = (res.peak_locations - p.omega_m) / g
        print(f"{name:>8}: peaks at (Omega - Omega_m)/Gamma = {np.array2string(rel, precision=3)}")
        print(f"{'':>8}  spacings/Gamma = {np.array2string(np.diff(rel), precision=3)}")
    print(f"grid step = {np.diff(comp.full.frequencies)[0] / g:.3f} Gamma; elapsed {time.perf_counter() - t0:.1f} s")
    if args.out:
        data = np.column_stack([comp.full.frequencies / (2 * math.pi), comp.full.S_xx, comp.eff.S_xx, comp.duffing.S_xx])
        np.savetxt(args.out, data, delimiter=",", header="Omega_Hz,S_xx_full,S_xx_eff,S_xx_duffing", fmt="%.12g")


if __name__ == "__main__":
    main()
