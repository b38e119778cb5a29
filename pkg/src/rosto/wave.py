"""
Travelling-wave profiles of the reduced Ostrovsky equation.

A travelling wave u(x, t) = U(x - c t) solves

    (c - U) U' + (antiderivative of U) = 0,

and along every orbit the first integral

    E = 1/2 (c - U)^2 (U')^2 + c/2 U^2 - U^3/3

is constant. The smooth single-lobe family exists for 1 < c < C_STAR and
terminates at the peaked parabolic wave at c = C_STAR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .periodic import (
    PeriodicGrid,
    Profile,
    antiderivative,
    centered_derivative,
    integrate,
    project_zero_mean,
)

C_STAR = math.pi**2 / 9
BAND_EDGE = math.pi**2 / 6
GROWTH_RATE = math.pi / 6
PEAK_SLOPE = math.pi / 3
PEAK_ANGLE = math.pi - 2 * math.atan(math.pi / 3)
E_STAR = C_STAR**3 / 6

_GL_X, _GL_W = np.polynomial.legendre.leggauss(160)


@dataclass(frozen=True)
class WaveConstants:
    c_star: float = C_STAR
    band_edge: float = BAND_EDGE
    growth_rate: float = GROWTH_RATE
    peak_slope: float = PEAK_SLOPE
    peak_angle: float = PEAK_ANGLE


@dataclass(frozen=True)
class WaveParams:
    c: float
    e_level: float


def peaked_formula(z):
    """U*(z) = (3 z^2 - pi^2) / 18 on [-pi, pi]."""
    z = np.asarray(z, dtype=float)
    return (3.0 * z**2 - math.pi**2) / 18.0


def peaked_profile(grid: PeriodicGrid, project: bool = True) -> Profile:
    """Samples of the peaked wave.

    The raw samples have a discrete mean of order 1/m^2 (the continuous mean
    is zero, but the kink at +-pi aliases). With ``project=True`` that
    residue is removed so the profile is zero-mean to rounding.
    """
    p = grid.sample(peaked_formula)
    return project_zero_mean(p) if project else p


def peaked_params() -> WaveParams:
    return WaveParams(C_STAR, E_STAR)


def first_integral(params: WaveParams, u, u_prime):
    c = params.c
    u = np.asarray(u, dtype=float)
    u_prime = np.asarray(u_prime, dtype=float)
    return 0.5 * (c - u) ** 2 * u_prime**2 + 0.5 * c * u**2 - u**3 / 3.0


def first_integral_profile(c: float, u: Profile) -> np.ndarray:
    """E along a zero-mean profile, using (c - U) U' = -antiderivative(U)."""
    g = antiderivative(u).values
    v = u.values
    return 0.5 * g**2 + 0.5 * c * v**2 - v**3 / 3.0


def _cubic_roots(c: float, e: float) -> tuple[float, float, float]:
    """Real roots r1 < r2 < r3 of 2E - c U^2 + (2/3) U^3, polished by Newton."""
    if not 0.0 < e < c**3 / 6:
        raise ValueError(f"E={e} outside the closed-orbit range (0, c^3/6)")
    # trigonometric form of the depressed cubic U^3 - 1.5 c U^2 + 3E = 0
    p = -0.75 * c**2
    q = -0.25 * c**3 + 3.0 * e
    r = 2.0 * math.sqrt(-p / 3.0)
    arg = max(-1.0, min(1.0, 3.0 * q / (p * r)))
    phi = math.acos(arg) / 3.0
    roots = sorted(r * math.cos(phi - 2.0 * math.pi * k / 3.0) + 0.5 * c for k in range(3))
    polished = []
    for x in roots:
        for _ in range(4):
            f = 2.0 * e - c * x * x + (2.0 / 3.0) * x**3
            df = 2.0 * x * (x - c)
            if df == 0.0:
                break
            step = f / df
            x -= step
            if abs(step) <= 1e-16 * (1.0 + abs(x)):
                break
        polished.append(x)
    return polished[0], polished[1], polished[2]


def _theta_integrand(c, r1, r2, r3, theta):
    # dz/dtheta after U = r1 + (r2 - r1) sin^2(theta)
    u = r1 + (r2 - r1) * np.sin(theta) ** 2
    return 2.0 * (c - u) / np.sqrt((2.0 / 3.0) * (r3 - u))


def half_period(c: float, e: float) -> float:
    """z-distance from the trough to the crest on the orbit at level E."""
    r1, r2, r3 = _cubic_roots(c, e)
    theta = (_GL_X + 1.0) * math.pi / 4.0
    return float(np.sum(_GL_W * _theta_integrand(c, r1, r2, r3, theta)) * math.pi / 4.0)


def _bisect(f, lo: float, hi: float, tol: float, maxiter: int = 200) -> float:
    flo = f(lo)
    fhi = f(hi)
    if flo * fhi > 0:
        raise ValueError(f"root not bracketed on [{lo}, {hi}]")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def smooth_wave_solve(c: float, grid: PeriodicGrid) -> tuple[Profile, WaveParams]:
    """Smooth single-lobe wave of speed c in (1, C_STAR).

    The level E is found by bisection on the half-period mismatch, then the
    profile is recovered from z(theta) by quadrature and Newton inversion at
    every grid node.
    """
    if not 1.0 < c < C_STAR:
        raise ValueError(f"smooth waves exist for 1 < c < pi^2/9, got c={c}")
    eps = 1e-12 * c**3
    e = _bisect(lambda e: half_period(c, e) - math.pi, eps, c**3 / 6 - eps, tol=1e-15 * c**3)
    r1, r2, r3 = _cubic_roots(c, e)

    def z_of(theta):
        t = 0.5 * (_GL_X[None, :] + 1.0) * theta[:, None]
        vals = _theta_integrand(c, r1, r2, r3, t)
        return 0.5 * theta * (vals @ _GL_W)

    table = np.linspace(0.0, 0.5 * math.pi, 1025)
    ztab = z_of(table)
    # the half period equals pi only to the root tolerance; rescale the table ends
    target = np.abs(grid.nodes) * (ztab[-1] / math.pi)
    theta = PchipInterpolator(ztab, table)(target)
    for _ in range(8):
        step = (z_of(theta) - target) / _theta_integrand(c, r1, r2, r3, theta)
        theta = np.clip(theta - step, 0.0, 0.5 * math.pi)
        if np.max(np.abs(step)) < 1e-15:
            break
    u = r1 + (r2 - r1) * np.sin(theta) ** 2
    return project_zero_mean(Profile(grid, u)), WaveParams(c, e)


def residual(c: float, u: Profile) -> Profile:
    """Samples of (c - U) U' + antiderivative(U).

    U' uses fourth-order finite differences, one-sided next to +-pi.
    """
    du = centered_derivative(u)
    g = antiderivative(u).values
    return u.with_values((c - u.values) * du + g)


def sqrt_singular_profile(grid: PeriodicGrid, c: float = C_STAR) -> Profile:
    """Test profile c (1 - sqrt(pi^2 - z^2)/pi), mean-corrected.

    Stands in for waves with a square-root cusp at +-pi; Hölder-1/2 there.
    """
    z = grid.nodes
    u = c * (1.0 - np.sqrt(np.maximum(math.pi**2 - z**2, 0.0)) / math.pi)
    return project_zero_mean(Profile(grid, u))


def holder_exponent(u: Profile, c: float | None = None, n_offsets: int = 64) -> float:
    """Scaling exponent of |c - U(pi - h)| ~ h^alpha at the crest.

    ``c`` defaults to the sampled crest value U(+-pi). A mean correction
    shifts the whole profile, so for corrected profiles the crest value, not
    the nominal speed, is the level the power law is measured from.

    Least squares of log|c - U(pi - h)| on [log h, 1, h] over log-spaced grid
    offsets h in [8 dz, pi/4]. The linear-in-h column absorbs the regular
    correction factor of a power law so the slope reports the local exponent.
    """
    m = u.grid.m
    dz = u.grid.h
    if c is None:
        c = float(u.values[0])
    kmax = int(math.floor((math.pi / 4) / dz))
    if kmax < 8:
        raise ValueError("grid too coarse for a Hölder estimate")
    ks = np.unique(np.round(np.geomspace(8, kmax, n_offsets)).astype(int))
    diff = np.abs(c - u.values[m - ks])
    ok = diff > 0
    if np.count_nonzero(ok) < 8:
        raise ValueError("fewer than 8 usable sample pairs")
    h = ks[ok] * dz
    design = np.column_stack([np.log(h), np.ones_like(h), h])
    coef, *_ = np.linalg.lstsq(design, np.log(diff[ok]), rcond=None)
    return float(coef[0])


def energy_momentum(u: Profile) -> tuple[float, float]:
    """H = int[-(antiderivative u)^2 - u^3/3] dz and Q = int u^2 dz."""
    g = antiderivative(u)
    h_val = integrate(u.with_values(-g.values**2 - u.values**3 / 3.0))
    q_val = integrate(u.with_values(u.values**2))
    return h_val, q_val


def phase_plane_data(c: float, e_levels, n_scan: int = 400) -> list[tuple[float, float, float, str]]:
    """Level curves of the first integral below the singular line U = c.

    Rows are (E, U, U', branch) with branch "upper" or "lower". Only U where
    2E - c U^2 + 2/3 U^3 >= 0 lie on the level set; the roots are included in
    the scan so turning points and isolated points appear exactly.
    """
    if c <= 0:
        raise ValueError("phase plane is drawn for c > 0")
    rows = []
    for e in e_levels:
        e = float(e)
        roots = np.roots([2.0 / 3.0, -c, 0.0, 2.0 * e])
        real = np.sort(roots[np.abs(roots.imag) <= 1e-9 * max(1.0, c)].real)
        lo = min(-c, float(real[0])) if real.size else -c
        scan = np.linspace(lo, c, n_scan, endpoint=False)
        scan = np.unique(np.concatenate([scan, real[(real >= lo) & (real < c)]]))
        poly = 2.0 * e - c * scan**2 + (2.0 / 3.0) * scan**3
        tol = 1e-12 * max(1.0, c**3)
        keep = poly >= -tol
        for u, pv in zip(scan[keep], poly[keep]):
            up = math.sqrt(max(0.0, pv)) / (c - u)
            rows.append((e, float(u), up, "upper"))
            rows.append((e, float(u), -up if up else 0.0, "lower"))
    return rows
