"""
Linearized evolution about the peaked wave,

    v_t + (1/6) d/dz[(z^2 - pi^2) v] = g,   g = antiderivative of v,

solved along the exact characteristics. Along a characteristic the value
V(s, t) = v(Z(s, t), t) obeys dV/dt = -Z V / 3 + G with G = g(Z(s, t), t).

Labels are stored as eta = artanh(s/pi). In that variable the characteristic
flow is the translation eta -> eta - pi t/6, dz = pi sech^2(eta - pi t/6) d eta,
and both the collapsing layer at z = -pi (width ~ e^{-pi t/3}) and the bulk of
the physical domain stay resolved on a uniform eta grid. The source g is the
running integral of v dz, which is a smooth quadrature in eta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .periodic import (
    PeriodicGrid,
    Profile,
    antiderivative,
    integrate_seam_corrected,
    interp,
    norm_l1,
    norm_l2,
)
from .wave import C_STAR, GROWTH_RATE

PI = math.pi
U_STAR_NORM = math.sqrt(2 * PI**5 / 405)
SUMMARY_KEYS = ("rate", "rate_residual", "C_used", "admissible_flags", "passed_upper", "passed_lower")
NORMS_HEADER = ("t", "l2", "l1", "linf", "energyL", "x1seminorm", "innerUv", "upper_bound", "lower_bound")


def example_v0(a: float, grid: PeriodicGrid) -> Profile:
    """Odd perturbation x (pi^2 - x^2) / (1 + a^2 x^2)."""
    if a <= 0:
        raise ValueError("a must be positive")
    return grid.sample(lambda x: x * (PI**2 - x**2) / (1.0 + a**2 * x**2))


def example_v0_norms(a: float) -> tuple[float, float]:
    """Closed-form L1 and L2 norms of :func:`example_v0`."""
    if a <= 0:
        raise ValueError("a must be positive")
    l1 = (PI**2 / a**2 + 1.0 / a**4) * math.log1p(PI**2 * a**2) - PI**2 / a**2
    l2sq = (
        (PI**4 + 6 * PI**2 / a**2 + 5 / a**4) * math.atan(PI * a)
        - PI * (15 + 13 * PI**2 * a**2) / (3 * a**3)
    ) / a**3
    return l1, math.sqrt(l2sq)


def inequality_threshold(C: float) -> float:
    """Largest ratio ||v0||_1 / ||v0||_2 compatible with the constant C."""
    return math.sqrt(PI) * (1 - 4 * C**2) / (48 * math.sqrt(2))


def largest_admissible_C(l1: float, l2: float) -> float | None:
    """Largest C with C^2 in (0, 1/4) satisfying the L1/L2 inequality, if any."""
    ratio = l1 / l2
    one_minus = 48 * math.sqrt(2) * ratio / math.sqrt(PI)
    if one_minus >= 1.0:
        return None
    return 0.5 * math.sqrt(1.0 - one_minus)


def check_admissible(v0: Profile, C: float) -> dict[str, bool]:
    """Flags for the two moment constraints and the L1/L2 inequality."""
    if not 0 < C < 0.5:
        raise ValueError("C must lie in (0, 1/2)")
    s = v0.grid.closed_nodes
    w = np.append(v0.values, v0.values[0])
    l2 = norm_l2(v0)
    first = abs(np.trapezoid(s * w**2, s)) <= 1e-8 * l2**2
    second = abs(np.trapezoid(s**2 * w, s)) <= 1e-8 * l2 * PI**2
    third = norm_l1(v0) <= inequality_threshold(C) * l2
    return {"constraint_1": bool(first), "constraint_2": bool(second), "inequality": bool(third)}


def linear_energy(v: Profile) -> float:
    """<L v, v> = int (c* - U*) v^2 dz - ||antiderivative v||^2."""
    z = v.grid.nodes
    g = antiderivative(v).values
    # the weight has a slope jump at +-pi, so the first term gets end corrections
    weighted = integrate_seam_corrected(v.with_values((PI**2 - z**2) / 6.0 * v.values**2))
    return float(weighted - v.grid.h * np.sum(g**2))


@dataclass(frozen=True)
class LabelGrid:
    """Uniform grid in eta = artanh(s/pi)."""

    eta: np.ndarray = field(repr=False)

    @classmethod
    def for_horizon(cls, t_final: float, n: int, margin: float = 18.0) -> "LabelGrid":
        reach = GROWTH_RATE * max(t_final, 0.0) + margin
        return cls(np.linspace(-reach, reach, n))

    @property
    def n(self) -> int:
        return self.eta.size

    @property
    def d_eta(self) -> float:
        return float(self.eta[1] - self.eta[0])

    @property
    def s(self) -> np.ndarray:
        return PI * np.tanh(self.eta)

    def position(self, t: float) -> np.ndarray:
        return PI * np.tanh(self.eta - GROWTH_RATE * t)

    def dz_deta(self, t: float) -> np.ndarray:
        return PI / np.cosh(self.eta - GROWTH_RATE * t) ** 2

    def deta_dz(self, t: float) -> np.ndarray:
        return np.cosh(self.eta - GROWTH_RATE * t) ** 2 / PI


@dataclass(frozen=True)
class EvolutionState:
    t: float
    v_labels: np.ndarray = field(repr=False)
    labels: LabelGrid
    grid: PeriodicGrid


def _cumulative(f: np.ndarray, h: float) -> np.ndarray:
    # fourth-order running integral; f is negligible at both ends
    fp = np.concatenate(([0.0], f, [0.0]))
    seg = (h / 24.0) * (-fp[:-3] + 13.0 * fp[1:-2] + 13.0 * fp[2:-1] - fp[3:])
    out = np.empty_like(f)
    out[0] = 0.0
    np.cumsum(seg, out=out[1:])
    return out


def source_term(labels: LabelGrid, v: np.ndarray, t: float) -> np.ndarray:
    """G(s, t) = g(Z(s, t), t), g the zero-mean antiderivative of v."""
    h = labels.d_eta
    jac = labels.dz_deta(t)
    running = _cumulative(v * jac, h)
    shift = -h * np.dot(running, jac) / (2 * PI)
    return running + shift


def _rhs(labels: LabelGrid, v: np.ndarray, t: float, source: bool) -> np.ndarray:
    out = -labels.position(t) * v / 3.0
    if source:
        out += source_term(labels, v, t)
    return out


def initial_state(v0: Profile, labels: LabelGrid) -> EvolutionState:
    return EvolutionState(0.0, np.asarray(interp(v0, labels.s)), labels, v0.grid)


def step(state: EvolutionState, dt: float, source: bool = True) -> EvolutionState:
    """One classical RK4 step of dV/dt = -Z V / 3 + G on the fixed labels."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    lab, v, t = state.labels, state.v_labels, state.t
    k1 = _rhs(lab, v, t, source)
    k2 = _rhs(lab, v + 0.5 * dt * k1, t + 0.5 * dt, source)
    k3 = _rhs(lab, v + 0.5 * dt * k2, t + 0.5 * dt, source)
    k4 = _rhs(lab, v + dt * k3, t + dt, source)
    v_new = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return EvolutionState(t + dt, v_new, lab, state.grid)


def truncated_labels(v0: Profile, labels: LabelGrid, t: float) -> np.ndarray:
    """Closed-form truncated solution on eta labels.

    dZ/ds = cosh^2(eta) / cosh^2(eta - pi t/6), so V = v0(s) cosh^2(eta - pi t/6) / cosh^2(eta).
    """
    v_init = np.asarray(interp(v0, labels.s))
    return v_init * (np.cosh(labels.eta - GROWTH_RATE * t) / np.cosh(labels.eta)) ** 2


def state_diagnostics(state: EvolutionState) -> dict[str, float]:
    """Norms and invariants of v(., t) by quadrature in the label variable."""
    lab, v, t = state.labels, state.v_labels, state.t
    h = lab.d_eta
    jac = lab.dz_deta(t)
    z = lab.position(t)
    g = source_term(lab, v, t)
    weight = (PI**2 - z**2) / 6.0  # c* - U*(Z)
    f = weight * v
    x1 = h * np.sum(np.gradient(f, h) ** 2 * lab.deta_dz(t))
    return {
        "l2": float(math.sqrt(h * np.sum(v**2 * jac))),
        "l1": float(h * np.sum(np.abs(v) * jac)),
        "linf": float(np.max(np.abs(v))),
        "energyL": float(h * np.sum(weight * v**2 * jac) - h * np.sum(g**2 * jac)),
        "x1seminorm": float(math.sqrt(x1)),
        "innerUv": float(h * np.sum((C_STAR - weight) * v * jac)),
        "mean": float(h * np.sum(v * jac)),
        "g_sup": float(np.max(np.abs(g))),
    }


def state_profile(state: EvolutionState, grid: PeriodicGrid | None = None) -> Profile:
    """Sample v(., t) on a physical grid by interpolation in eta."""
    grid = grid or state.grid
    lab = state.labels
    z = grid.nodes
    with np.errstate(divide="ignore"):
        eta = np.arctanh(z / PI) + GROWTH_RATE * state.t
    eta = np.clip(eta, lab.eta[0], lab.eta[-1])
    return Profile(grid, np.interp(eta, lab.eta, state.v_labels))


def growth_rate_fit(t, l2, window: float = 1.0 / 3.0) -> tuple[float, float, float]:
    """Least-squares fit log l2 = rate t + intercept over the final window.

    Returns (rate, intercept, max abs log residual).
    """
    t = np.asarray(t, dtype=float)
    l2 = np.asarray(l2, dtype=float)
    sel = t >= t[-1] - window * (t[-1] - t[0])
    if np.count_nonzero(sel) < 20:
        raise ValueError("need at least 20 samples in the fit window")
    if np.any(l2[sel] <= 0):
        raise ValueError("norms must be positive in the fit window")
    y = np.log(l2[sel])
    rate, intercept = np.polyfit(t[sel], y, 1)
    resid = float(np.max(np.abs(y - (rate * t[sel] + intercept))))
    return float(rate), float(intercept), resid


@dataclass
class RunDiagnostics:
    series: dict[str, np.ndarray]
    rate: float
    intercept: float
    rate_residual: float
    C_used: float | None
    admissible_flags: dict[str, bool]
    passed_upper: bool
    passed_lower: bool
    mode: str
    final_state: EvolutionState | None = None

    @property
    def t(self) -> np.ndarray:
        return self.series["t"]

    @property
    def l2(self) -> np.ndarray:
        return self.series["l2"]

    def summary(self) -> dict:
        return {
            "rate": self.rate,
            "rate_residual": self.rate_residual,
            "C_used": self.C_used,
            "admissible_flags": dict(self.admissible_flags),
            "passed_upper": self.passed_upper,
            "passed_lower": self.passed_lower,
        }

    def rows(self):
        cols = [self.series[k] for k in NORMS_HEADER]
        return zip(*cols)


class BlowUpError(RuntimeError):
    """The discrete solution left the range the scheme is meant for."""


def evolve(
    v0: Profile,
    t_final: float,
    dt: float,
    mode: Literal["truncated", "full"] = "full",
    *,
    n_labels: int | None = None,
    C: float = 0.25,
    source: bool = True,
    margin: float = 18.0,
) -> RunDiagnostics:
    """Evolve v0 to t_final and record norms, bounds and invariants.

    ``mode="truncated"`` evaluates the closed form at each sample time;
    ``mode="full"`` integrates with RK4 (``source=False`` switches the
    nonlocal term off, which must reproduce the truncated flow).
    """
    if mode not in ("truncated", "full"):
        raise ValueError(f"unknown mode {mode!r}")
    if t_final <= 0:
        raise ValueError("t_final must be positive")
    if not 0 < dt <= 0.01:
        raise ValueError("dt must lie in (0, 0.01]")
    if not v0.is_zero_mean():
        raise ValueError("v0 must have zero mean")
    n_labels = n_labels or 4 * v0.grid.m
    labels = LabelGrid.for_horizon(t_final, n_labels, margin)

    n_steps = int(round(t_final / dt))
    stride = max(1, int(round(max(dt, t_final / 2000) / dt)))
    records: list[dict[str, float]] = []

    state = initial_state(v0, labels)
    l2_0 = None

    def record(st: EvolutionState) -> None:
        nonlocal l2_0
        d = state_diagnostics(st)
        d["t"] = st.t
        if l2_0 is None:
            l2_0 = d["l2"]
        elif d["l2"] > 1e12 * l2_0:
            raise BlowUpError(f"l2 grew past 1e12 * l2(0) at t={st.t:.4g}")
        records.append(d)

    record(state)
    for i in range(1, n_steps + 1):
        if mode == "full":
            state = step(state, dt, source=source)
            state = EvolutionState(i * dt, state.v_labels, labels, v0.grid)
        if i % stride == 0 or i == n_steps:
            if mode == "truncated":
                state = EvolutionState(i * dt, truncated_labels(v0, labels, i * dt), labels, v0.grid)
            record(state)

    series = {k: np.array([r[k] for r in records]) for k in records[0]}
    t = series["t"]
    growth = np.exp(GROWTH_RATE * t)
    series["upper_bound"] = growth * l2_0
    C_used = largest_admissible_C(norm_l1(v0), norm_l2(v0))
    series["lower_bound"] = growth * l2_0 * (C_used if C_used is not None else np.nan)
    rate, intercept, resid = growth_rate_fit(t, series["l2"])
    passed_upper = bool(np.all(series["l2"] <= series["upper_bound"] * (1 + 1e-3)))
    passed_lower = bool(C_used is not None and np.all(series["l2"][1:] >= series["lower_bound"][1:]))
    return RunDiagnostics(
        series=series,
        rate=rate,
        intercept=intercept,
        rate_residual=resid,
        C_used=C_used,
        admissible_flags=check_admissible(v0, C),
        passed_upper=passed_upper,
        passed_lower=passed_lower,
        mode=mode,
        final_state=state,
    )
