"""Open-system spectrum of the anharmonic third-sound mode.

Pipeline: Hamiltonian in a truncated harmonic number basis -> lowest M
eigenpairs -> Lindblad generator in that eigenbasis with thermal jump rates ->
steady state -> two-time correlation via the quantum regression theorem ->
displacement spectrum as a sum of Lorentzians.

Dissipator normalization: jump weights use x_jk / x_zpf, so the harmonic limit
is a damped oscillator whose energy decays at rate gamma.

Correlation convention: G(tau) = Tr[eps_minus exp(L tau) (eps_plus rho_ss)],
where eps_plus = sum_{k>j} x_jk |j><k| lowers the energy.  G is therefore the
emission-ordered correlation <x^(-)(tau) x^(+)(0)>; its spectrum has peaks at
positive frequencies E_k - E_j weighted by the population of the upper level.

Density matrices are vectorized row-major: vec(rho)[a*M + b] = rho[a, b].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg
from scipy.sparse.linalg import expm_multiply

from thirdsound.springs import (
    HBAR,
    Film,
    OscillatorParams,
    SpringSet,
    oscillator_params,
    spring_constants,
    thermal_occupation,
)
from thirdsound.specfun import ModeIndex


class ConvergenceError(RuntimeError):
    pass


class DegenerateSteadyStateError(RuntimeError):
    pass


def position_power(N: int, p: int) -> np.ndarray:
    """(a + a^dagger)^p restricted to the lowest N number states, exact elements."""
    big = N + p
    a = np.diag(np.sqrt(np.arange(1, big, dtype=float)), 1)
    P = np.linalg.matrix_power(a + a.T, p)[:N, :N]
    return 0.5 * (P + P.T)  # exactly symmetric despite rounding in the products


def build_hamiltonian(params: OscillatorParams, spring: SpringSet, N: int) -> np.ndarray:
    if N < 8:
        raise ValueError("basis size N must be at least 8")
    x = params.x_zpf
    H = np.diag(HBAR * params.omega_m * (np.arange(N) + 0.5))
    if spring.beta != 0.0:
        H = H + spring.beta / 3.0 * x**3 * position_power(N, 3)
    if spring.alpha != 0.0:
        H = H + spring.alpha / 4.0 * x**4 * position_power(N, 4)
    return H


@dataclass(frozen=True)
class Eigensystem:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def diagonalize(H: np.ndarray, M: int) -> Eigensystem:
    """Lowest M eigenpairs of a real-symmetric H, ascending."""
    if not np.allclose(H, H.T, rtol=0, atol=1e-12 * np.abs(H).max()):
        raise ValueError("H must be symmetric")
    if not 1 <= M <= H.shape[0]:
        raise ValueError("M must lie in [1, dim(H)]")
    w, v = linalg.eigh(H, subset_by_index=[0, M - 1])
    norm = np.linalg.norm(H, 2)
    residual = np.linalg.norm(H @ v - v * w, axis=0)
    if np.any(residual > 1e-10 * norm):
        raise ConvergenceError(f"eigenpair residual {residual.max():.3e} exceeds tolerance")
    return Eigensystem(eigenvalues=w, eigenvectors=v)


def levels_needed(omega_m: float, T: float) -> int:
    """Minimum kept levels: 5 + 4 n_th(hbar Omega_m)."""
    n_th = thermal_occupation(HBAR * omega_m, T)
    return int(math.ceil(5 + 4 * n_th))


@dataclass(frozen=True)
class QuantumModel:
    N: int
    M: int
    eigenvalues: np.ndarray
    x_elements: np.ndarray
    gamma: float
    temperature: float
    x_zpf: float
    omega_m: float
    convergence: float = field(default=float("nan"))


def _eigensystem_for(params, spring, N, M):
    eig = diagonalize(build_hamiltonian(params, spring, N), M)
    X = params.x_zpf * position_power(N, 1)
    return eig.eigenvalues, eig.eigenvectors.T @ X @ eig.eigenvectors


def build_model(
    params: OscillatorParams,
    spring: SpringSet,
    gamma: float,
    T: float,
    N: int = 120,
    M: int | None = None,
    rtol: float = 1e-8,
    max_N: int = 1000,
) -> QuantumModel:
    """Diagonalize and keep M levels, enlarging N until the kept eigenvalues converge.

    Convergence: the lowest M eigenvalues move by less than ``rtol`` (relative)
    when N grows by N/4.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if T < 0:
        raise ValueError("temperature must be non-negative")
    M = max(M or 0, levels_needed(params.omega_m, T))
    N = max(N, M + 8)
    while True:
        E, X = _eigensystem_for(params, spring, N, M)
        E_big, _ = _eigensystem_for(params, spring, N + N // 4, M)
        change = float(np.max(np.abs(E_big - E) / np.abs(E)))
        if change < rtol:
            break
        if N >= max_N:
            raise ConvergenceError(f"eigenvalues not converged at N={N} (relative change {change:.2e})")
        N = min(2 * N, max_N)
    return QuantumModel(
        N=N, M=M, eigenvalues=E, x_elements=0.5 * (X + X.T), gamma=gamma,
        temperature=T, x_zpf=params.x_zpf, omega_m=params.omega_m, convergence=change,
    )


def jump_rates(model: QuantumModel) -> np.ndarray:
    """c[j, k]: coefficient of D[|j><k|] in the generator (zero on the diagonal)."""
    E = model.eigenvalues
    M = model.M
    xt2 = np.abs(model.x_elements / model.x_zpf) ** 2
    c = np.zeros((M, M))
    for j in range(M):
        for k in range(j + 1, M):
            dE = E[k] - E[j]
            n = thermal_occupation(dE, model.temperature)
            c[j, k] = 0.5 * model.gamma * xt2[j, k] * (n + 1)  # emission k -> j
            c[k, j] = 0.5 * model.gamma * xt2[j, k] * n  # absorption j -> k
    return c


def liouvillian(model: QuantumModel) -> np.ndarray:
    """Dense M^2 x M^2 generator acting on row-major vec(rho)."""
    if model.temperature < 0:
        raise ValueError("temperature must be non-negative")
    M = model.M
    E = model.eigenvalues
    c = jump_rates(model)
    out_rate = c.sum(axis=0)  # gamma_k: sum of coefficients of jumps leaving level k
    a, b = np.divmod(np.arange(M * M), M)
    diag = -1j * (E[a] - E[b]) / HBAR - (out_rate[a] + out_rate[b])
    L = np.diag(diag.astype(complex))
    pop = np.arange(M) * (M + 1)
    L[np.ix_(pop, pop)] += 2 * c * (1 - np.eye(M))
    return L


def apply_liouvillian(model: QuantumModel, rho: np.ndarray) -> np.ndarray:
    return (liouvillian(model) @ rho.reshape(-1)).reshape(rho.shape)


def steady_state(L: np.ndarray, null_tol: float = 1e-12) -> np.ndarray:
    """Unique trace-one null vector of L as a density matrix."""
    M = int(round(math.sqrt(L.shape[0])))
    _, s, vh = linalg.svd(L)
    null = np.flatnonzero(s <= null_tol * s[0])
    if len(null) == 0:
        null = np.array([len(s) - 1])
    if len(null) > 1:
        raise DegenerateSteadyStateError(f"steady state is not unique: null space dimension {len(null)}")
    # the SVD settles uniqueness; a bordered least-squares solve with the trace row
    # gives the null vector to full precision even when |L| spans many decades
    A = np.vstack([L, np.eye(M).reshape(1, -1)])
    b = np.zeros(M * M + 1, dtype=complex)
    b[-1] = 1.0
    rho = np.linalg.lstsq(A, b, rcond=None)[0].reshape(M, M)
    rho = 0.5 * (rho + rho.conj().T)
    residual = np.linalg.norm(L @ rho.reshape(-1))
    if residual > 1e-10 * s[0]:
        raise ConvergenceError(f"steady-state residual {residual:.3e} too large")
    return rho


def amplitude_operators(model: QuantumModel) -> tuple[np.ndarray, np.ndarray]:
    """(eps_plus, eps_minus): strictly upper-triangular part of x and its adjoint."""
    eps_plus = np.triu(model.x_elements, 1).astype(complex)
    return eps_plus, eps_plus.conj().T


@dataclass(frozen=True)
class CorrelationModes:
    """G(tau) = sum_m amplitudes[m] * exp(rates[m] * tau), tau >= 0."""

    amplitudes: np.ndarray
    rates: np.ndarray

    def __call__(self, tau) -> np.ndarray:
        tau = np.asarray(tau, dtype=float)
        return np.exp(np.multiply.outer(tau, self.rates)) @ self.amplitudes

    @property
    def frequencies(self) -> np.ndarray:
        return self.rates.imag

    @property
    def half_widths(self) -> np.ndarray:
        return -self.rates.real


def correlation_modes(model: QuantumModel, L: np.ndarray, rho_ss: np.ndarray, cutoff: float = 1e-14) -> CorrelationModes:
    eps_plus, eps_minus = amplitude_operators(model)
    start = (eps_plus @ rho_ss).reshape(-1)
    readout = eps_minus.T.reshape(-1)  # Tr[eps_minus X] = sum_ab eps_minus[b, a] X[a, b]
    w, V = linalg.eig(L)
    if np.linalg.cond(V) > 1e10:
        raise ConvergenceError("Liouvillian eigenbasis is ill-conditioned")
    coeff = linalg.solve(V, start)
    amp = (readout @ V) * coeff
    keep = np.abs(amp) > cutoff * max(np.abs(amp).sum(), 1e-300)
    rates = w[keep]
    if np.any(rates.real > 1e-10 * np.abs(w).max()):
        raise ConvergenceError("Liouvillian has a growing mode")
    return CorrelationModes(amplitudes=amp[keep], rates=rates)


def correlation_ode(model: QuantumModel, L: np.ndarray, rho_ss: np.ndarray, tau: np.ndarray) -> np.ndarray:
    """Independent route: propagate eps_plus rho_ss with exp(L tau) on a uniform grid."""
    eps_plus, eps_minus = amplitude_operators(model)
    start = (eps_plus @ rho_ss).reshape(-1)
    readout = eps_minus.T.reshape(-1)
    tau = np.asarray(tau, dtype=float)
    states = expm_multiply(L, start, start=tau[0], stop=tau[-1], num=len(tau), endpoint=True)
    return states @ readout


def correlation(model: QuantumModel, L: np.ndarray, rho_ss: np.ndarray, tau) -> np.ndarray:
    """G(tau) samples; falls back to direct propagation if L is defective."""
    try:
        return correlation_modes(model, L, rho_ss)(tau)
    except ConvergenceError:
        return correlation_ode(model, L, rho_ss, np.asarray(tau))


def spectrum_from_modes(modes: CorrelationModes, omegas) -> np.ndarray:
    """S(Omega) = (1/2pi) int exp(-i Omega tau) G(tau) dtau with G(-tau) = G(tau)*."""
    omegas = np.asarray(omegas, dtype=float)
    out = np.empty_like(omegas)
    chunk = max(1, 2_000_000 // max(len(modes.rates), 1))
    for i in range(0, len(omegas), chunk):
        w = omegas[i:i + chunk]
        # evaluate relative to each line centre to keep full precision at large Omega
        detune = np.subtract.outer(w, modes.rates.imag)
        denom = 1j * detune - modes.rates.real
        out[i:i + chunk] = (modes.amplitudes / denom).real.sum(axis=1) / math.pi
    return out


def spectrum_from_samples(tau: np.ndarray, G: np.ndarray, omegas, demodulation: float = 0.0) -> np.ndarray:
    """Discrete Fourier route on uniformly sampled G(tau), tau >= 0 starting at 0.

    ``demodulation`` is the carrier removed from G before sampling, i.e. G was
    sampled as G(tau) exp(-i demodulation tau); the result is still indexed by
    absolute frequency.
    """
    tau = np.asarray(tau, dtype=float)
    dt = tau[1] - tau[0]
    weights = np.full(len(tau), dt)
    weights[0] = weights[-1] = dt / 2
    omegas = np.asarray(omegas, dtype=float)
    out = np.empty_like(omegas)
    for i, w in enumerate(omegas):
        out[i] = (np.exp(-1j * (w - demodulation) * tau) * G * weights).sum().real / math.pi
    return out


@dataclass(frozen=True)
class SpectrumResult:
    frequencies: np.ndarray
    S_xx: np.ndarray
    peak_locations: np.ndarray
    peak_indices: np.ndarray = field(default_factory=lambda: np.array([], dtype=int))
    modes: CorrelationModes | None = None


def find_peaks(omegas: np.ndarray, S: np.ndarray, rel_threshold: float = 1e-3) -> tuple[np.ndarray, np.ndarray]:
    """Strict local maxima above rel_threshold * max(S); returns (indices, refined positions).

    Positions are refined by a parabola through the maximum and its neighbours.
    """
    if len(S) < 3:
        return np.array([], dtype=int), np.array([])
    mid = S[1:-1]
    is_peak = (mid > S[:-2]) & (mid >= S[2:]) & (mid > rel_threshold * S.max())
    idx = np.flatnonzero(is_peak) + 1
    y0, y1, y2 = S[idx - 1], S[idx], S[idx + 1]
    curv = y0 - 2 * y1 + y2
    shift = np.where(curv < 0, 0.5 * (y0 - y2) / np.where(curv == 0, 1, curv), 0.0)
    step = omegas[idx + 1] - omegas[idx]
    return idx, omegas[idx] + shift * step


def default_grid(modes_list, omega_m: float, span_widths: float = 15.0, points_per_width: float = 20.0,
                 weight_cut: float = 1e-6, max_points: int = 4_000_000) -> np.ndarray:
    """Uniform grid around the single-phonon band (0.5 to 1.5 Omega_m) of the given lines.

    Step: narrowest full width among retained lines / points_per_width.
    """
    lo, hi, narrow = np.inf, -np.inf, np.inf
    for modes in modes_list:
        f, hw, a = modes.frequencies, modes.half_widths, np.abs(modes.amplitudes)
        sel = (a > weight_cut * a.max()) & (f > 0.5 * omega_m) & (f < 1.5 * omega_m) & (hw > 0)
        if not np.any(sel):
            continue
        lo = min(lo, np.min(f[sel] - span_widths * hw[sel]))
        hi = max(hi, np.max(f[sel] + span_widths * hw[sel]))
        narrow = min(narrow, np.min(hw[sel]))
    if not np.isfinite(lo):
        raise ValueError("no spectral lines in the single-phonon band")
    step = 2 * narrow / points_per_width
    n = int(min(max_points, math.ceil((hi - lo) / step) + 1))
    return np.linspace(lo, hi, n)


def spectrum(model: QuantumModel, omegas=None, rel_threshold: float = 1e-3) -> SpectrumResult:
    L = liouvillian(model)
    rho = steady_state(L)
    modes = correlation_modes(model, L, rho)
    if omegas is None:
        omegas = default_grid([modes], model.omega_m)
    S = spectrum_from_modes(modes, omegas)
    idx, peaks = find_peaks(np.asarray(omegas), S, rel_threshold)
    return SpectrumResult(frequencies=np.asarray(omegas), S_xx=S, peak_locations=peaks, peak_indices=idx, modes=modes)


@dataclass(frozen=True)
class Fig4Comparison:
    full: SpectrumResult
    eff: SpectrumResult
    duffing: SpectrumResult
    params: OscillatorParams
    spring: SpringSet
    gamma: float
    models: dict = field(default_factory=dict)

    def markers(self, n_lines: int = 5) -> dict[str, np.ndarray]:
        n = np.arange(n_lines)
        return {
            "eff": self.params.omega_m + (n + 1) * self.params.delta_omega,
            "bare": self.params.omega_m + (n + 1) * self.params.delta_omega_bare,
        }


def fig4_comparison(film: Film, mode: ModeIndex, T: float, Q: float, N: int = 120, M: int | None = 15,
                    omegas=None, rel_threshold: float = 1e-3, spring: SpringSet | None = None,
                    rtol: float = 1e-8) -> Fig4Comparison:
    """Spectra for the full (alpha, beta), effective (alpha_eff, 0) and bare Duffing (alpha, 0) models."""
    spring = spring or spring_constants(film, mode)
    params = oscillator_params(film, mode, spring)
    gamma = params.omega_m / Q
    variants = {
        "full": spring,
        "eff": spring.replace(alpha=spring.alpha_eff, beta=0.0),
        "duffing": spring.replace(beta=0.0, alpha_eff=spring.alpha),
    }
    models, modes = {}, {}
    for name, s in variants.items():
        model = build_model(params, s, gamma, T, N=N, M=M, rtol=rtol)
        L = liouvillian(model)
        modes[name] = correlation_modes(model, L, steady_state(L))
        models[name] = model
    if omegas is None:
        omegas = default_grid(modes.values(), params.omega_m)
    results = {}
    for name, m in modes.items():
        S = spectrum_from_modes(m, omegas)
        idx, peaks = find_peaks(omegas, S, rel_threshold)
        results[name] = SpectrumResult(frequencies=omegas, S_xx=S, peak_locations=peaks, peak_indices=idx, modes=m)
    return Fig4Comparison(params=params, spring=spring, gamma=gamma, models=models, **results)
