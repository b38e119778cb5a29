"""
Exact characteristic flow of the truncated linearized equation

    v_t + (1/6) d/dz[(z^2 - pi^2) v] = 0.

Characteristics solve dZ/dt = (Z^2 - pi^2)/6 with fixed points +-pi, i.e.
Z = pi tanh(artanh(s/pi) - pi t/6). The hyperbolic functions are written
through q = 1 - tanh(pi t/6) = 2/(exp(pi t/3) + 1) so nothing overflows and the
cancellation near s = +pi is avoided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .periodic import PeriodicGrid, Profile

PI = math.pi


def _q(t: float) -> float:
    x = PI * t / 3.0
    if x > 700.0:
        return 0.0
    return 2.0 / (math.exp(x) + 1.0)


@dataclass(frozen=True)
class CharMap:
    """The characteristic map s -> Z(s, t) at a fixed time t."""

    t: float

    def __call__(self, s):
        return char_position(s, self.t)

    def jacobian(self, s):
        return char_jacobian(s, self.t)

    def inverse(self, z):
        return char_inverse(z, self.t)


def _sech2(t: float) -> float:
    # q (2 - q) = sech^2(pi t/6), evaluated without cancellation for t < 0
    e = math.exp(-abs(PI * t / 6.0))
    return (2.0 * e / (1.0 + e * e)) ** 2


def char_position(s, t: float):
    """Z(s, t), the position at time t of the characteristic starting at s."""
    s = np.asarray(s, dtype=float)
    q = _q(t)
    num = (s - PI) + PI * q
    den = (PI - s) + s * q
    with np.errstate(invalid="ignore", divide="ignore"):
        z = PI * num / den
    z = np.where(s >= PI, PI, np.where(s <= -PI, -PI, z))
    return float(z) if z.ndim == 0 else z


def char_inverse(z, t: float):
    """Label s with Z(s, t) = z (the flow run backwards)."""
    return char_position(z, -t)


def char_jacobian(s, t: float):
    """dZ/ds = pi^2 / (pi cosh(pi t/6) - s sinh(pi t/6))^2."""
    s = np.asarray(s, dtype=float)
    q = _q(t)
    den = (PI - s) + s * q
    with np.errstate(divide="ignore"):
        out = PI**2 * _sech2(t) / den**2
    return float(out) if out.ndim == 0 else out


def growth_factor(s, t: float):
    """(pi cosh(pi t/6) - s sinh(pi t/6))^2 / pi^2 = 1 / char_jacobian."""
    s = np.asarray(s, dtype=float)
    x = PI * t / 6.0
    out = (PI * np.cosh(x) - s * np.sinh(x)) ** 2 / PI**2
    return float(out) if out.ndim == 0 else out


def label_grid(grid: PeriodicGrid) -> np.ndarray:
    """Characteristic labels: the physical nodes plus +pi.

    The transported solution is not periodic in the label (V(+pi, t) and
    V(-pi, t) scale by e^{-pi t/3} and e^{pi t/3}), so both ends are kept.
    """
    return np.array(grid.closed_nodes)


def _closed_values(v0: Profile) -> np.ndarray:
    return np.append(v0.values, v0.values[0])


def truncated_solution(v0: Profile, t: float) -> tuple[np.ndarray, np.ndarray]:
    """V(s, t) = (pi cosh - s sinh)^2 / pi^2 * v0(s) on the closed label grid."""
    s = label_grid(v0.grid)
    return s, growth_factor(s, t) * _closed_values(v0)


@dataclass(frozen=True)
class TruncatedNorms:
    l2: float
    l1: float
    trunc_energy: float


def truncated_norms(v0: Profile, t: float) -> TruncatedNorms:
    """L2 norm at time t by change of variables; L1 and the truncated energy.

    The last two are conserved by the truncated flow, so they are evaluated
    from v0 alone.
    """
    s = label_grid(v0.grid)
    w = _closed_values(v0)
    l2sq = np.trapezoid(growth_factor(s, t) * w**2, s)
    l1 = np.trapezoid(np.abs(w), s)
    energy = np.trapezoid((PI**2 - s**2) * w**2, s)
    return TruncatedNorms(float(np.sqrt(l2sq)), float(l1), float(energy))


def pushforward(v_labels: np.ndarray, t: float, grid: PeriodicGrid) -> Profile:
    """Physical-space view v(z, t) = V(char_inverse(z, t), t) on ``grid``.

    ``v_labels`` lives on the closed label grid of the same size; cubic
    interpolation is done in the label variable.
    """
    s = label_grid(grid)
    v_labels = np.asarray(v_labels, dtype=float)
    if v_labels.shape != s.shape:
        raise ValueError(f"expected {s.size} label values, got {v_labels.shape}")
    spline = CubicSpline(s, v_labels, bc_type="not-a-knot")
    feet = char_inverse(grid.nodes, t)
    return Profile(grid, spline(feet))


def characteristic_table(s_values, t_values) -> list[tuple[float, float, float, float]]:
    rows = []
    for t in t_values:
        z = np.atleast_1d(char_position(s_values, t))
        j = np.atleast_1d(char_jacobian(s_values, t))
        for s, zz, jj in zip(np.atleast_1d(s_values), z, j):
            rows.append((float(s), float(t), float(zz), float(jj)))
    return rows
