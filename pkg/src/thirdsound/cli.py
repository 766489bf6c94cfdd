"""Command-line front end.

    thirdsound springs  [--config FILE] [--preset silica|silicon] [--out FILE] [--jobs N]
    thirdsound spectrum ...
    thirdsound thermal  ...
    thirdsound checks   ...

Every command writes a CSV (to --out or stdout) whose first line is a
``# config-hash:`` comment.  Exit codes: 0 ok (warnings allowed), 1 usage
error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from thirdsound.config import ConfigError, RunConfig, load_config
from thirdsound.lindblad import ConvergenceError, DegenerateSteadyStateError, fig4_comparison
from thirdsound.specfun import QuadratureError
from thirdsound.springs import (
    HBAR,
    blockade_report,
    critical_velocity_ratios,
    oscillator_params,
    spring_constants,
    thermal_occupation,
)
from thirdsound.thermal import PropertyTableError, bundled_properties, load_properties, thermal_quality_factor

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2
TWO_PI = 2 * math.pi


class NumericalFailure(RuntimeError):
    pass


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.12g}"
    return str(value)


def write_csv(cfg: RunConfig, header: list[str], rows: list[dict], comments: tuple[str, ...] = ()) -> str:
    buf = io.StringIO()
    buf.write(f"# config-hash: {cfg.digest()}\n")
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(row[h]) for h in header])
    return buf.getvalue()


def _with_warnings(fn, *args):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        row = fn(*args)
    msgs = []
    for w in caught:
        m = str(w.message)
        if m not in msgs:
            msgs.append(m)
    row["warnings"] = "; ".join(msgs)
    return row


def _run_points(fn, points: list, jobs: int) -> list[dict]:
    if jobs <= 1 or len(points) <= 1:
        return [_with_warnings(fn, p) for p in points]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_with_warnings, [fn] * len(points), points))


# springs -------------------------------------------------------------------

SPRINGS_COLUMNS = [
    "R_nm", "d_nm", "mu", "nu", "boundary", "a_vdw",
    "k", "beta", "alpha", "alpha_eff",
    "omega_m_Hz", "m_eff", "x_zpf", "delta_omega_Hz", "delta_omega_bare_Hz", "required_Q", "warnings",
]


def springs_row(cfg: RunConfig) -> dict:
    film, mode = cfg.film(), cfg.mode()
    s = spring_constants(film, mode)
    if cfg.alpha is not None or cfg.beta is not None:
        s = _override(s, cfg)
    p = oscillator_params(film, mode, s)
    return {
        "R_nm": cfg.R_nm, "d_nm": cfg.d_nm, "mu": mode.mu, "nu": mode.nu, "boundary": mode.boundary.value,
        "a_vdw": film.a_vdw, "k": s.k, "beta": s.beta, "alpha": s.alpha, "alpha_eff": s.alpha_eff,
        "omega_m_Hz": p.omega_m / TWO_PI, "m_eff": p.m_eff, "x_zpf": p.x_zpf,
        "delta_omega_Hz": p.delta_omega / TWO_PI, "delta_omega_bare_Hz": p.delta_omega_bare / TWO_PI,
        "required_Q": p.omega_m / p.delta_omega if p.delta_omega != 0 else math.inf,
    }


def _override(s, cfg: RunConfig):
    alpha = s.alpha if cfg.alpha is None else cfg.alpha
    beta = s.beta if cfg.beta is None else cfg.beta
    return s.replace(alpha=alpha, beta=beta, alpha_eff=alpha - (10.0 / 9.0) * beta**2 / s.k)


def cmd_springs(cfg: RunConfig, jobs: int = 1) -> str:
    rows = _run_points(springs_row, cfg.points(), jobs)
    return write_csv(cfg, SPRINGS_COLUMNS, rows, ("units: lengths nm in inputs, SI elsewhere; frequencies Hz",))


# spectrum ------------------------------------------------------------------

SPECTRUM_COLUMNS = ["Omega", "S_xx_full", "S_xx_eff", "S_xx_duffing"]


def cmd_spectrum(cfg: RunConfig, jobs: int = 1) -> tuple[str, str]:
    """Returns (spectrum CSV, peaks sidecar CSV)."""
    if cfg.sweep:
        raise ConfigError("spectrum does not take sweep axes")
    film, mode = cfg.film(), cfg.mode()
    spring = spring_constants(film, mode)
    if cfg.alpha is not None or cfg.beta is not None:
        spring = _override(spring, cfg)
    params = oscillator_params(film, mode, spring)
    Q = params.omega_m / cfg.gamma(params.omega_m)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        comp = fig4_comparison(film, mode, cfg.T_K, Q, N=cfg.N, M=cfg.M, spring=spring, rtol=cfg.rtol)
    notes = sorted({str(w.message) for w in caught})
    omegas = comp.full.frequencies
    rows = [
        {"Omega": w / TWO_PI, "S_xx_full": a, "S_xx_eff": b, "S_xx_duffing": c}
        for w, a, b, c in zip(omegas, comp.full.S_xx, comp.eff.S_xx, comp.duffing.S_xx)
    ]
    comments = ["units: Omega in Hz (Omega/2pi); S_xx in m^2 s/rad", *[f"warning: {n}" for n in notes]]
    main = write_csv(cfg, SPECTRUM_COLUMNS, rows, tuple(comments))

    peak_rows = []
    for name, res in (("full", comp.full), ("eff", comp.eff), ("duffing", comp.duffing)):
        for i, (idx, w) in enumerate(zip(res.peak_indices, res.peak_locations)):
            peak_rows.append({"kind": "peak", "variant": name, "n": i, "Omega_grid": omegas[idx] / TWO_PI,
                              "Omega_refined": w / TWO_PI})
    n_lines = max(len(comp.full.peak_locations), 1)
    for name, vals in comp.markers(n_lines).items():
        for i, w in enumerate(vals):
            peak_rows.append({"kind": "marker", "variant": name, "n": i, "Omega_grid": math.nan,
                              "Omega_refined": w / TWO_PI})
    sidecar = write_csv(
        cfg, ["kind", "variant", "n", "Omega_grid", "Omega_refined"], peak_rows,
        (f"gamma_Hz: {fmt(comp.gamma / TWO_PI)}", f"delta_omega_Hz: {fmt(comp.params.delta_omega / TWO_PI)}",
         f"delta_omega_bare_Hz: {fmt(comp.params.delta_omega_bare / TWO_PI)}",
         "markers: Omega_m + (n+1) delta_omega with alpha_eff ('eff') and bare alpha ('bare')"),
    )
    return main, sidecar


# thermal -------------------------------------------------------------------

THERMAL_COLUMNS = ["T_K", "f_Hz", "d_nm", "Q", "Re_c3", "Im_c3", "penetration_depth_nm", "clamped", "warnings"]


def thermal_row(args) -> dict:
    cfg, table_path = args
    table = load_properties(table_path) if table_path else bundled_properties()
    film = cfg.film()
    if cfg.f_Hz is None:
        omega = oscillator_params(film, cfg.mode()).omega_m
    else:
        omega = TWO_PI * cfg.f_Hz
    r = thermal_quality_factor(table.at(cfg.T_K), film, omega)
    return {
        "T_K": cfg.T_K, "f_Hz": omega / TWO_PI, "d_nm": cfg.d_nm, "Q": r.Q,
        "Re_c3": r.c3_complex.real, "Im_c3": r.c3_complex.imag,
        "penetration_depth_nm": r.penetration_depth * 1e9, "clamped": r.clamped,
    }


def cmd_thermal(cfg: RunConfig, jobs: int = 1) -> str:
    table = load_properties(cfg.table) if cfg.table else bundled_properties()
    points = cfg.points()
    for p in points:
        table.at(p.T_K)  # range check before dispatch
    rows = _run_points(thermal_row, [(p, cfg.table) for p in points], jobs)
    return write_csv(cfg, THERMAL_COLUMNS, rows, (f"property table: {table.source}",))


# checks --------------------------------------------------------------------

CHECKS_COLUMNS = [
    "R_nm", "d_nm", "mu", "nu", "T_K", "n_th", "zpf_ratio", "thermal_ratio", "superfluid",
    "omega_m_Hz", "gamma_Hz", "delta_omega_Hz", "delta_omega_bare_Hz", "required_Q", "required_Q_bare", "Q",
    "blockade", "blockade_bare", "x_zpf", "x_crit", "x_crit_eff", "d_ge_R", "warnings",
]


def checks_row(cfg: RunConfig) -> dict:
    film, mode = cfg.film(), cfg.mode()
    s = spring_constants(film, mode)
    p = oscillator_params(film, mode, s)
    gamma = cfg.gamma(p.omega_m)
    v = critical_velocity_ratios(film, mode, cfg.T_K)
    b = blockade_report(p, s, gamma)
    return {
        "R_nm": cfg.R_nm, "d_nm": cfg.d_nm, "mu": mode.mu, "nu": mode.nu, "T_K": cfg.T_K,
        "n_th": thermal_occupation(HBAR * p.omega_m, cfg.T_K),
        "zpf_ratio": v.zpf_ratio, "thermal_ratio": v.thermal_ratio, "superfluid": v.thermal_ratio < 1,
        "omega_m_Hz": p.omega_m / TWO_PI, "gamma_Hz": gamma / TWO_PI,
        "delta_omega_Hz": p.delta_omega / TWO_PI, "delta_omega_bare_Hz": p.delta_omega_bare / TWO_PI,
        "required_Q": b.required_Q, "required_Q_bare": p.omega_m / p.delta_omega_bare,
        "Q": p.omega_m / gamma, "blockade": b.single_phonon_resolved, "blockade_bare": gamma < p.delta_omega_bare,
        "x_zpf": p.x_zpf, "x_crit": b.x_crit, "x_crit_eff": b.x_crit_eff, "d_ge_R": film.d >= film.R,
    }


def report_lines(rows: list[dict]) -> list[str]:
    out = []
    for r in rows:
        verdict = "resolved" if r["blockade"] else "not resolved"
        out.append(
            f"R={fmt(r['R_nm'])} nm d={fmt(r['d_nm'])} nm T={fmt(r['T_K'])} K: "
            f"v/v_c={r['thermal_ratio']:.3g} ({'superfluid' if r['superfluid'] else 'SUPERFLUIDITY LOST'}), "
            f"dOmega/2pi={r['delta_omega_Hz']:.3g} Hz (bare {r['delta_omega_bare_Hz']:.3g} Hz), "
            f"Q={r['Q']:.3g} vs required {r['required_Q']:.3g} (bare {r['required_Q_bare']:.3g}): "
            f"single-phonon {verdict}"
        )
        if r["warnings"]:
            out.append(f"  warnings: {r['warnings']}")
    return out


def cmd_checks(cfg: RunConfig, jobs: int = 1) -> tuple[str, list[str]]:
    rows = _run_points(checks_row, cfg.points(), jobs)
    return write_csv(cfg, CHECKS_COLUMNS, rows), report_lines(rows)


# entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thirdsound", description="Nonlinear third-sound resonator calculations")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("springs", "spring constants and single-phonon shifts"),
        ("spectrum", "open-system displacement spectra (full, alpha_eff, bare Duffing)"),
        ("thermal", "thermal-dissipation quality factor surface"),
        ("checks", "critical-velocity, validity and blockade report"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", help="key = value config file")
        p.add_argument("--out", help="output CSV (default: stdout)")
        p.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes (default: CPU count)")
        p.add_argument("--preset", choices=("silica", "silicon"), help="substrate material preset")
    return parser


def _resolve_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    if args.preset:
        cfg = cfg.replace(preset=args.preset)
    if args.out:
        cfg = cfg.replace(output=args.out)
    return cfg.validate()


def _emit(text: str, path: str | None):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg = _resolve_config(args)
        out = cfg.output
        if args.command == "springs":
            _emit(cmd_springs(cfg, args.jobs), out)
        elif args.command == "spectrum":
            main_csv, sidecar = cmd_spectrum(cfg, args.jobs)
            _emit(main_csv, out)
            if out:
                Path(out).with_suffix(".peaks.csv").write_text(sidecar)
            else:
                sys.stdout.write("\n" + sidecar)
        elif args.command == "thermal":
            _emit(cmd_thermal(cfg, args.jobs), out)
        elif args.command == "checks":
            text, report = cmd_checks(cfg, args.jobs)
            _emit(text, out)
            print("\n".join(report), file=sys.stdout if out else sys.stderr)
    except (ConfigError, PropertyTableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, DegenerateSteadyStateError, QuadratureError, NumericalFailure,
            np.linalg.LinAlgError, RuntimeError, FloatingPointError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
