"""Bessel functions, their zeros, and the mode-overlap coefficients phi^(p).

The radial mode shape of a disk-confined third-sound wave is J_mu(zeta r/R),
where zeta is a zero of J_mu' (free rim) or of J_mu (fixed rim).  All spring
constants depend on the mode through

    phi(p) = int_0^zeta J_mu(q)^p q dq / (zeta^2 J_mu(zeta)^p),   p = 2, 3, 4.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

MAX_ORDER = 64


class Boundary(enum.Enum):
    FREE = "free"
    FIXED = "fixed"

    @classmethod
    def parse(cls, value: "str | Boundary") -> "Boundary":
        if isinstance(value, Boundary):
            return value
        return cls(str(value).strip().lower())


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved relative error {achieved:.3e})")
        self.achieved = achieved


@dataclass(frozen=True)
class ModeIndex:
    mu: int
    nu: int
    boundary: Boundary = Boundary.FREE

    def __post_init__(self):
        if int(self.mu) != self.mu or self.mu < 0:
            raise ValueError(f"azimuthal order mu must be a non-negative integer, got {self.mu}")
        if int(self.nu) != self.nu or self.nu < 1:
            raise ValueError(f"radial number nu must be a positive integer, got {self.nu}")
        if self.mu > MAX_ORDER:
            raise ValueError(f"mu > {MAX_ORDER} is not supported")
        object.__setattr__(self, "mu", int(self.mu))
        object.__setattr__(self, "nu", int(self.nu))
        object.__setattr__(self, "boundary", Boundary.parse(self.boundary))

    @property
    def zeta(self) -> float:
        return bessel_jprime_zero(self)


def bessel_j(mu: int, x):
    """J_mu(x) for integer order 0 <= mu <= 64; accepts scalars or arrays."""
    if mu < 0 or int(mu) != mu or mu > MAX_ORDER:
        raise ValueError(f"order must be an integer in [0, {MAX_ORDER}], got {mu}")
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("bessel_j argument must be finite")
    out = special.jv(int(mu), arr)
    return float(out) if out.ndim == 0 else out


def bessel_jprime(mu: int, x):
    """Derivative J_mu'(x) = (J_{mu-1}(x) - J_{mu+1}(x)) / 2."""
    if mu == 0:
        return -bessel_j(1, x)
    return 0.5 * (bessel_j(mu - 1, x) - bessel_j(mu + 1, x))


def _root_function(mode: ModeIndex):
    if mode.boundary is Boundary.FREE:
        return lambda q: bessel_jprime(mode.mu, q)
    return lambda q: bessel_j(mode.mu, q)


@functools.lru_cache(maxsize=None)
def _zeros(mu: int, boundary: Boundary, count: int) -> tuple[float, ...]:
    f = _root_function(ModeIndex(mu, 1, boundary))
    step = math.pi / 8
    # q = 0 is a stationary point of J_0 and a zero of J_mu (mu >= 1); never count it
    lo = max(float(mu), step / 4)
    limit = lo + (count + 10) * math.pi + mu
    roots = []
    f_lo = f(lo)
    while len(roots) < count:
        hi = lo + step
        if hi > limit:
            raise RuntimeError(
                f"failed to bracket zero #{len(roots) + 1} of order {mu} ({boundary.value}) below q={limit:.1f}"
            )
        f_hi = f(hi)
        if f_lo == 0.0:
            roots.append(lo)
        elif f_lo * f_hi < 0:
            roots.append(optimize.brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200))
        lo, f_lo = hi, f_hi
    return tuple(roots)


def bessel_jprime_zero(mode: ModeIndex) -> float:
    """zeta_{mu,nu}: the nu-th positive zero of J_mu' (FREE) or J_mu (FIXED).

    For mu = 0 with a free rim the trivial root at q = 0 is excluded, so
    zeta_{0,1} = 3.8317.
    """
    return _zeros(mode.mu, mode.boundary, mode.nu)[-1]


def angular_factor(p: int, mu: int) -> float:
    """int_0^{2 pi} cos(mu theta)^p dtheta for p in {2, 3, 4}."""
    zero = 1.0 if mu == 0 else 0.0
    if p == 2:
        return math.pi * (1 + zero)
    if p == 3:
        return 2 * math.pi * zero
    if p == 4:
        return math.pi * (3 + 5 * zero) / 4
    raise ValueError(f"p must be 2, 3 or 4, got {p}")


# Gauss-Kronrod 7/15 nodes and weights (QUADPACK qk15)
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


def _gk15(f, a: float, b: float) -> tuple[float, float]:
    half = 0.5 * (b - a)
    y = f(0.5 * (a + b) + half * _NODES)
    k = half * float(_KW @ y)
    g = half * float(_GW @ y)
    return k, abs(k - g)


def gauss_kronrod(f, breakpoints, rtol: float = 1e-10, atol: float = 0.0, max_panels: int = 2000) -> tuple[float, float]:
    """Adaptive G7/K15 panel subdivision over [breakpoints[0], breakpoints[-1]].

    ``f`` must be vectorized.  Interior breakpoints start as panel edges so
    sign changes of the integrand never sit inside an initial panel.
    Returns (integral, error estimate); raises QuadratureError on failure.
    """
    panels = []
    for a, b in zip(breakpoints[:-1], breakpoints[1:]):
        if b > a:
            panels.append((a, b, *_gk15(f, a, b)))
    while True:
        total = sum(p[2] for p in panels)
        err = sum(p[3] for p in panels)
        scale = sum(abs(p[2]) for p in panels)
        if err <= max(atol, rtol * abs(total)) or err <= 1e-15 * scale:
            return total, err
        if len(panels) >= max_panels:
            raise QuadratureError("panel budget exhausted", err / max(abs(total), 1e-300))
        worst = max(range(len(panels)), key=lambda i: panels[i][3])
        a, b, _, _ = panels.pop(worst)
        mid = 0.5 * (a + b)
        panels.append((a, mid, *_gk15(f, a, mid)))
        panels.append((mid, b, *_gk15(f, mid, b)))


def phi_closed_form(mode: ModeIndex) -> float:
    """phi^(2) = (1 - mu^2/zeta^2) / 2, valid for the free rim."""
    z = bessel_jprime_zero(mode)
    return 0.5 * (1.0 - mode.mu**2 / z**2)


def phi_quadrature(p: int, mode: ModeIndex, rtol: float = 1e-10) -> float:
    if p not in (2, 3, 4):
        raise ValueError(f"p must be 2, 3 or 4, got {p}")
    z = bessel_jprime_zero(mode)
    rim = bessel_j(mode.mu, z)
    if rim == 0.0 or abs(rim) < 1e-12:
        raise ValueError("rim amplitude J_mu(zeta) vanishes; the rim reference coordinate is undefined")
    interior = [q for q in _zeros(mode.mu, Boundary.FIXED, mode.nu + mode.mu // 2 + 2) if q < z]
    integral, _ = gauss_kronrod(lambda q: bessel_j(mode.mu, q) ** p * q, [0.0, *interior, z], rtol=rtol)
    return integral / (z**2 * rim**p)


@functools.lru_cache(maxsize=None)
def _phi_cached(p: int, mu: int, nu: int, boundary: Boundary) -> float:
    mode = ModeIndex(mu, nu, boundary)
    if p == 2:
        closed = phi_closed_form(mode)
        numeric = phi_quadrature(2, mode)
        if abs(closed - numeric) > 1e-8:
            raise QuadratureError("phi(2) closed form and quadrature disagree", abs(closed - numeric))
        return closed
    return phi_quadrature(p, mode)


def phi(p: int, mode: ModeIndex) -> float:
    """Mode-overlap coefficient phi^(p)_{mu,nu} (memoized)."""
    if p not in (2, 3, 4):
        raise ValueError(f"p must be 2, 3 or 4, got {p}")
    if mode.boundary is Boundary.FIXED:
        raise ValueError("phi is normalized by the rim amplitude, which is zero for a fixed rim")
    return _phi_cached(p, mode.mu, mode.nu, mode.boundary)


def mode_shape(mode: ModeIndex, r_over_R, theta):
    """Unnormalized mode amplitude J_mu(zeta r/R) cos(mu theta)."""
    r = np.asarray(r_over_R, dtype=float)
    if np.any(r < 0) or np.any(r > 1):
        raise ValueError("r_over_R must lie in [0, 1]")
    val = bessel_j(mode.mu, bessel_jprime_zero(mode) * r) * np.cos(mode.mu * np.asarray(theta, dtype=float))
    return float(val) if np.ndim(val) == 0 else val
