"""
Spectrum of the Hessian operator at the peaked wave,

    L = P0 (antiderivative^2 + c* - U*) P0   on zero-mean L^2,

where c* - U*(z) = (pi^2 - z^2)/6. The spectrum is a band [0, pi^2/6] plus a
single negative eigenvalue, the root of a transcendental equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .periodic import PeriodicGrid, Profile, antiderivative, norm_l2, project_zero_mean
from .wave import BAND_EDGE

PI = math.pi


def multiplier_coefficient(n):
    """Exponential Fourier coefficient of (pi^2 - z^2)/6 at mode n."""
    n = np.asarray(n)
    safe = np.where(n == 0, 1, n)
    out = np.where(n == 0, PI**2 / 9, np.where(n % 2 == 0, -1.0, 1.0) / (3.0 * safe**2))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class GalerkinMatrix:
    """Truncation of L to modes -N..-1, 1..N of the exponential basis."""

    n_modes: int
    entries: np.ndarray = field(repr=False)

    @property
    def modes(self) -> np.ndarray:
        n = self.n_modes
        return np.concatenate([np.arange(-n, 0), np.arange(1, n + 1)])

    def parity_blocks(self) -> tuple[np.ndarray, np.ndarray]:
        """Cosine (even) and sine (odd) blocks over modes 1..N."""
        n = self.n_modes
        pos = self.entries[n:, n:]
        cross = self.entries[n:, n - 1::-1]  # column k is mode -k
        return pos + cross, pos - cross


def build_matrix(n_modes: int) -> GalerkinMatrix:
    if n_modes < 8:
        raise ValueError("need at least 8 modes")
    n = n_modes
    k = np.concatenate([np.arange(-n, 0), np.arange(1, n + 1)])
    a = multiplier_coefficient(k[:, None] - k[None, :]) - np.diag(1.0 / k.astype(float) ** 2)
    return GalerkinMatrix(n, a)


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray = field(repr=False)
    lambda1: float
    band: tuple[float, float]
    transcendental_root: float
    even: np.ndarray = field(repr=False)
    odd: np.ndarray = field(repr=False)

    def count_below(self, threshold: float) -> int:
        return int(np.count_nonzero(self.eigenvalues < threshold))


def eigen_solve(a: GalerkinMatrix) -> SpectrumResult:
    even_block, odd_block = a.parity_blocks()
    even = scipy.linalg.eigvalsh(even_block)
    odd = scipy.linalg.eigvalsh(odd_block)
    ev = np.sort(np.concatenate([even, odd]))
    return SpectrumResult(
        eigenvalues=ev,
        lambda1=float(ev[0]),
        band=(float(ev[1]), float(ev[-1])),
        transcendental_root=transcendental_root(),
        even=even,
        odd=odd,
    )


def _log_ratio(r: float) -> float:
    # log((r + pi)/(r - pi)) for r > pi, accurate as r -> pi
    return math.log1p(2 * PI / (r - PI))


def transcendental_fn(lam: float) -> float:
    """(pi^2 + 3 lam) log((r + pi)/(r - pi)) - 3 pi r with r = sqrt(pi^2 - 6 lam)."""
    if lam >= 0:
        raise ValueError("defined for lambda < 0")
    r = math.sqrt(PI**2 - 6 * lam)
    return (PI**2 + 3 * lam) * _log_ratio(r) - 3 * PI * r


def transcendental_root(lo: float = -1.0, hi: float = -1e-6, tol: float = 1e-12) -> float:
    """Bisection for the unique negative root of :func:`transcendental_fn`."""
    flo = transcendental_fn(lo)
    if flo * transcendental_fn(hi) > 0:
        raise ValueError("no sign change in the bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = transcendental_fn(mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def zero_mean_fn(lam: float) -> float:
    """Mean of w2 over a period, as a function of the spectral parameter."""
    if lam < 0:
        r = math.sqrt(PI**2 - 6 * lam)
        return -0.75 + (PI**2 + 3 * lam) / (4 * PI * r) * _log_ratio(r)
    if lam > BAND_EDGE:
        r = math.sqrt(6 * lam - PI**2)
        return -0.75 - (PI**2 + 3 * lam) / (2 * PI * r) * math.atan(PI / r)
    raise ValueError("lambda lies in the band [0, pi^2/6]")


def w2_formula(lam: float, z):
    """Even solution of (pi^2 - z^2 - 6 lam) w'' - 4 z w' + 4 w = 0 for lam < 0."""
    if lam >= 0:
        raise ValueError("defined for lambda < 0")
    z = np.asarray(z, dtype=float)
    r = math.sqrt(PI**2 - 6 * lam)
    if not r > PI:
        raise ValueError("log singularity inside the period")
    return -1.0 + z**2 / (2 * (r**2 - z**2)) + 3 * z / (4 * r) * np.log((r + z) / (r - z))


def eigenfunction_w2(lam: float, grid: PeriodicGrid) -> Profile:
    return grid.sample(lambda z: w2_formula(lam, z))


def apply_L(w: Profile) -> Profile:
    """(1/6) P0((pi^2 - z^2) w) + P0 antiderivative^2 w."""
    z = w.grid.nodes
    mult = project_zero_mean(w.with_values((PI**2 - z**2) / 6.0 * w.values))
    g = antiderivative(w)
    gg = antiderivative(project_zero_mean(g))
    return mult + project_zero_mean(gg)


def residual_eigenpair(lam: float, w: Profile) -> float:
    """Relative L2 residual of L w = lam w."""
    w = project_zero_mean(w)
    r = apply_L(w) - w * lam
    return norm_l2(r) / norm_l2(w)


def interior_smoothed_derivative(grid: PeriodicGrid) -> Profile:
    """Samples of dU*/dz = z/3 with the jump node z = -pi set to the midpoint 0."""
    z = grid.nodes
    d = z / 3.0
    d[0] = 0.0
    return Profile(grid, d)


def root_function_table(n_per_branch: int = 2000) -> list[tuple[float, float, str]]:
    """Samples of the zero-mean function on [-3, 0) and (pi^2/6, 5]."""
    rows = []
    neg = np.linspace(-3.0, 0.0, n_per_branch + 1)[:-1]
    for lam in neg:
        rows.append((float(lam), zero_mean_fn(float(lam)), "negative"))
    pos = np.linspace(BAND_EDGE, 5.0, n_per_branch + 1)[1:]
    for lam in pos:
        rows.append((float(lam), zero_mean_fn(float(lam)), "above_band"))
    return rows
