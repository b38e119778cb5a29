"""
One-shot verification: every acceptance check that fits in a couple of
minutes plus the invariant suites of each module, grouped by the result they
support.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from . import characteristics as ch
from . import evolution as ev
from . import spectral as sp
from . import wave as wv
from .periodic import (
    FourierSeries,
    PeriodicGrid,
    antiderivative,
    dft,
    idft,
    integrate_seam_corrected,
    interp,
    norm_l1,
    norm_l2,
    norm_linf,
    project_zero_mean,
)

PI = math.pi

GROUPS = (
    "periodic-calculus",
    "smooth-waves",
    "no-cusped-waves",
    "truncated-growth",
    "upper-bound",
    "full-growth",
    "spectrum",
)


@dataclass(frozen=True)
class Check:
    group: str
    name: str
    passed: bool
    value: float
    tolerance: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "passed", bool(self.passed))
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "tolerance", float(self.tolerance))

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark}  {self.group:<18} {self.name:<46} value={self.value:.6g}  tol={self.tolerance:.3g}"


def _le(group, name, value, tol) -> Check:
    value = float(value)
    return Check(group, name, bool(value <= tol), value, tol)


def _within(group, name, value, lo, hi) -> Check:
    value = float(value)
    return Check(group, name, bool(lo <= value <= hi), value, 0.5 * (hi - lo))


# ---------------------------------------------------------------- periodic


def peaked_fourier_error(m: int = 1024, n_max: int = 32) -> float:
    """Largest |DFT coefficient of U* - (-1)^n / (3 n^2)| over 1 <= |n| <= n_max."""
    f = dft(wv.peaked_profile(PeriodicGrid(m), project=False), n_max)
    n = np.arange(1, n_max + 1)
    exact = np.where(n % 2 == 0, 1.0, -1.0) / (3.0 * n**2)
    pos = np.abs(np.array([f[k] for k in n]) - exact)
    neg = np.abs(np.array([f[-k] for k in n]) - exact)
    return float(max(pos.max(), neg.max()))


def peaked_norm_error(m: int = 8192) -> float:
    """|norm_l2(U*)^2 - 2 pi^5 / 405|."""
    return abs(norm_l2(wv.peaked_profile(PeriodicGrid(m), project=False)) ** 2 - 2 * PI**5 / 405)


def suite_periodic(rng: np.random.Generator) -> list[Check]:
    g = "periodic-calculus"
    out = [
        _le(g, "U* Fourier coefficients, m=1024, n<=32", peaked_fourier_error(), 1e-6),
        _le(g, "||U*||_2^2 = 2 pi^5/405, m=8192", peaked_norm_error(), 1e-6),
    ]
    grid = PeriodicGrid(256)
    n_max = 40
    coeffs = np.zeros(2 * n_max + 1, dtype=complex)
    half = rng.normal(size=n_max) + 1j * rng.normal(size=n_max)
    coeffs[n_max + 1:] = half
    coeffs[:n_max] = np.conj(half[::-1])
    p = idft(FourierSeries(n_max, coeffs), grid)
    out.append(_le(g, "dft/idft round trip", np.max(np.abs(idft(dft(p, n_max), grid).values - p.values)) / norm_linf(p), 1e-12))
    a = antiderivative(p)
    out.append(_le(g, "antiderivative has zero mean", abs(a.mean()), 1e-12))
    out.append(_le(g, "sup|antiderivative| <= L1 norm", norm_linf(a) - norm_l1(p) * (1 + 1e-6), 0.0))
    even = project_zero_mean(grid.sample(lambda z: np.cos(2 * z) + z**2))
    ge = antiderivative(even).values
    out.append(_le(g, "antiderivative maps even to odd", np.max(np.abs(ge[1:] + ge[1:][::-1])), 1e-10))
    out.append(_le(g, "interp cos at pi/3", abs(interp(grid.sample(np.cos), PI / 3) - 0.5), 1e-8))
    return out


# ---------------------------------------------------------------- waves

SMOOTH_SPEEDS = (1.01, 1.05, 1.09, wv.C_STAR - 1e-4)


def smooth_family(m: int = 4096):
    grid = PeriodicGrid(m)
    return [(c, *wv.smooth_wave_solve(c, grid)) for c in SMOOTH_SPEEDS]


def wave_residual_sup(c: float, u, interior: bool = False) -> float:
    r = np.abs(wv.residual(c, u).values)
    return float(r[2:-1].max() if interior else r.max())


def single_lobe(u) -> bool:
    """One sign change of the discrete slope on the closed period."""
    d = np.diff(np.append(u.values, u.values[0]))
    s = np.sign(d[np.abs(d) > 1e-14 * np.max(np.abs(u.values))])
    return int(np.count_nonzero(np.diff(s) != 0)) == 1


def suite_waves(family=None) -> list[Check]:
    g = "smooth-waves"
    family = family or smooth_family()
    out = []
    amps = []
    for c, u, params in family:
        near_peak = c > 1.095
        tol = 1e-3 if near_peak else 1e-6
        out.append(_le(g, f"residual c={c:.6g}{' interior' if near_peak else ''}", wave_residual_sup(c, u, near_peak), tol))
        out.append(Check(g, f"zero-mean single lobe c={c:.6g}", u.is_zero_mean(1e-10) and single_lobe(u), abs(u.mean()), 1e-10))
        amps.append(float(u.values.max() - u.values.min()))
        e = wv.first_integral_profile(c, u)
        out.append(_le(g, f"first integral constant c={c:.6g}", np.ptp(e) / abs(params.e_level), 1e-8))
    out.append(Check(g, "amplitude increases with c", bool(np.all(np.diff(amps) > 0)), amps[-1], 0.0))
    c_top, _, p_top = family[-1]
    out.append(_le(g, "E -> c^3/6 at the upper end", c_top**3 / 6 - p_top.e_level, 1e-3))
    c_mid, _, p_mid = family[1]
    out.append(_le(g, "half period = pi at c=1.05", abs(wv.half_period(c_mid, p_mid.e_level) - PI), 1e-10))
    e_peak = wv.first_integral(wv.peaked_params(), -PI**2 / 18, 0.0)
    out.append(_le(g, "peaked wave E = c*^3/6", abs(e_peak - PI**6 / 4374), 1e-9))
    return out


def sqrt_residual_growth() -> float:
    r = [np.abs(wv.residual(wv.C_STAR, wv.sqrt_singular_profile(PeriodicGrid(m))).values).max() for m in (1024, 4096)]
    return float(r[1] / r[0])


def suite_no_cusp(family=None) -> list[Check]:
    g = "no-cusped-waves"
    grid = PeriodicGrid(4096)
    out = [
        _within(g, "Hölder exponent of U*", wv.holder_exponent(wv.peaked_profile(grid), wv.C_STAR), 0.98, 1.02),
        _within(g, "Hölder exponent of sqrt profile", wv.holder_exponent(wv.sqrt_singular_profile(grid)), 0.48, 0.52),
        Check(g, "sqrt residual grows m=1024 -> 4096", sqrt_residual_growth() >= 2.0, sqrt_residual_growth(), 2.0),
    ]
    family = family or smooth_family()
    u = family[1][1]
    out.append(_within(g, "Hölder exponent of smooth wave c=1.05", wv.holder_exponent(u, float(u.values.max())), 1.95, 2.05))
    interior = [np.abs(wv.residual(wv.C_STAR, wv.peaked_profile(PeriodicGrid(m))).values)[2:-1].max() for m in (1024, 4096)]
    out.append(Check(g, "U* interior residual decreases with m", interior[1] < interior[0] and interior[1] <= 1e-3, interior[1], 1e-3))
    return out


# ---------------------------------------------------------------- truncated flow


def truncated_bounds(a: float = 20.0, m: int = 4096, t_final: float = 30.0, n: int = 2000):
    """Closed-form l2(t) for example_v0(a) at n samples in (0, t_final]."""
    v0 = ev.example_v0(a, PeriodicGrid(m))
    l2_0 = norm_l2(v0)
    t = np.linspace(t_final / n, t_final, n)
    l2 = np.array([ch.truncated_norms(v0, tt).l2 for tt in t])
    growth = np.exp(wv.GROWTH_RATE * t) * l2_0
    return t, l2, growth


def suite_truncated(rng: np.random.Generator) -> list[Check]:
    g = "truncated-growth"
    t, l2, growth = truncated_bounds()
    out = [
        _le(g, "l2 <= e^{pi t/6}||v0||, 2000 samples", np.max(l2 / growth) - 1.0, 1e-12),
        Check(g, "l2 >= 1/2 e^{pi t/6}||v0||, 2000 samples", bool(np.all(l2 >= 0.5 * growth)), float(np.min(l2 / growth)), 0.5),
    ]
    rate = ev.growth_rate_fit(t, l2)[0]
    out.append(_le(g, "fitted truncated rate - pi/6", abs(rate - wv.GROWTH_RATE), 1e-3))
    s = rng.uniform(-PI, PI, 50)
    t1, t2 = rng.uniform(-10, 10, 2)
    gl = np.abs(ch.char_position(ch.char_position(s, t1), t2) - ch.char_position(s, t1 + t2)).max()
    out.append(_le(g, "characteristic group law", gl, 1e-10))
    errs = []
    for s0 in (-3.0, -1.0, 0.5, 2.5):
        integral, _ = quad(lambda tt: ch.char_position(s0, tt), 0.0, 2.0, epsabs=1e-13, epsrel=1e-13)
        errs.append(abs(ch.char_jacobian(s0, 2.0) - math.exp(integral / 3.0)))
    out.append(_le(g, "Jacobian = exp(1/3 int Z dt)", max(errs), 1e-8))
    total, _ = quad(lambda x: ch.char_jacobian(x, 2.0), -PI, PI, epsabs=1e-13)
    out.append(_le(g, "flow preserves length", abs(total - 2 * PI), 1e-8))
    grid = PeriodicGrid(1024)
    v0 = grid.sample(np.sin)
    _, vals = ch.truncated_solution(v0, 3.0)
    pushed = ch.pushforward(vals, 3.0, grid)
    out.append(_le(g, "pushforward mean, sin, t=3, m=1024", abs(integrate_seam_corrected(pushed)) / (2 * PI), 1e-6))
    grid = PeriodicGrid(4096)
    v0 = grid.sample(np.sin)
    _, vals = ch.truncated_solution(v0, 3.0)
    pushed = ch.pushforward(vals, 3.0, grid)
    ref = ch.truncated_norms(v0, 3.0).l2
    out.append(_le(g, "pushforward L2 vs change of variables", abs(norm_l2(pushed) / ref - 1), 1e-4))
    return out


# ---------------------------------------------------------------- full flow


def conserved_on_pushforward(a: float = 20.0, m: int = 4096, t: float = 1.0) -> tuple[float, float]:
    """Relative errors of L1 and truncated energy recomputed from the pushforward."""
    grid = PeriodicGrid(m)
    v0 = ev.example_v0(a, grid)
    exact = ch.truncated_norms(v0, t)
    _, vals = ch.truncated_solution(v0, t)
    pushed = ch.pushforward(vals, t, grid)
    z = grid.nodes
    l1 = integrate_seam_corrected(pushed.with_values(np.abs(pushed.values)))
    energy = integrate_seam_corrected(pushed.with_values((PI**2 - z**2) * pushed.values**2))
    return abs(l1 / exact.l1 - 1), abs(energy / exact.trunc_energy - 1)


def conserved_on_labels(a: float = 20.0, m: int = 4096, t: float = 10.0, n_labels: int = 65536) -> tuple[float, float]:
    """L1 and truncated energy at time t by quadrature in the eta labels.

    L1 is compared with its closed form. |v| has a kink where v changes sign,
    which limits the label quadrature to second order, hence the fine grid.
    """
    grid = PeriodicGrid(m)
    v0 = ev.example_v0(a, grid)
    exact = ch.truncated_norms(v0, t)
    l1_exact = ev.example_v0_norms(a)[0]
    labels = ev.LabelGrid.for_horizon(t, n_labels)
    v = ev.truncated_labels(v0, labels, t)
    jac = labels.dz_deta(t)
    z = labels.position(t)
    h = labels.d_eta
    l1 = h * np.sum(np.abs(v) * jac)
    energy = h * np.sum((PI**2 - z**2) * v**2 * jac)
    return abs(l1 / l1_exact - 1), abs(energy / exact.trunc_energy - 1)


def conservation_drifts(run: ev.RunDiagnostics) -> dict[str, float]:
    s = run.series
    l2 = s["l2"]
    return {
        "energyL": float(abs(s["energyL"][-1] - s["energyL"][0]) / l2[-1] ** 2),
        "innerUv": float(abs(s["innerUv"][-1] - s["innerUv"][0]) / (ev.U_STAR_NORM * l2[-1])),
        "mean": float(np.max(np.abs(s["mean"]) / s["l1"])),
        "g_sup": float(np.max(s["g_sup"] / s["l1"])),
    }


def suite_full(run: ev.RunDiagnostics | None = None) -> list[Check]:
    g = "full-growth"
    if run is None:
        run = ev.evolve(ev.example_v0(20, PeriodicGrid(4096)), 10.0, 1e-3)
    d = conservation_drifts(run)
    l1_err, energy_err = conserved_on_pushforward()
    l1_lab, energy_lab = conserved_on_labels()
    out = [
        _le(g, "<Lv,v> drift / ||v||^2 at t=10", d["energyL"], 1e-4),
        _le(g, "<U*,v> drift / (||U*|| ||v||) at t=10", d["innerUv"], 1e-6),
        _le(g, "mean of v(t) / ||v(t)||_1", d["mean"], 1e-6),
        _le(g, "sup|g| <= ||v||_1", d["g_sup"], 1.0),
        _le(g, "truncated L1 on pushforward, m=4096, t=1", l1_err, 1e-4),
        _le(g, "truncated energy on pushforward, m=4096, t=1", energy_err, 1e-4),
        _le(g, "truncated L1 on labels, t=10", l1_lab, 1e-4),
        _le(g, "truncated energy on labels, t=10", energy_lab, 1e-4),
        Check("upper-bound", "l2 <= e^{pi t/6}||v0||(1+1e-3), t<=10", run.passed_upper,
              float(np.max(run.l2 / run.series["upper_bound"])), 1 + 1e-3),
    ]
    grid = PeriodicGrid(4096)
    v0 = ev.example_v0(20, grid)
    off = ev.evolve(v0, 5.0, 1e-2, source=False)
    out.append(_le(g, "source off reproduces closed form, t=5", abs(off.l2[-1] / ch.truncated_norms(v0, 5.0).l2 - 1), 1e-6))
    errs = []
    for a in (1.0, 20.0, 100.0):
        l1, l2 = ev.example_v0_norms(a)
        v = ev.example_v0(a, PeriodicGrid(8192))
        errs.append(max(abs(norm_l1(v) / l1 - 1), abs(norm_l2(v) / l2 - 1)))
    out.append(_le(g, "closed-form norms of example data", max(errs), 1e-4))
    (l1a, l2a), (l1b, l2b) = ev.example_v0_norms(1e2), ev.example_v0_norms(1e3)
    scale_l1 = (l1b * 1e6 / math.log(1e6)) / (l1a * 1e4 / math.log(1e4))
    scale_l2 = (l2b * 1e3**1.5) / (l2a * 1e2**1.5)
    out.append(_within(g, "L1 ~ log(a)/a^2 between a=1e2 and 1e3", scale_l1, 0.8, 1.25))
    out.append(_within(g, "L2 ~ a^{-3/2} between a=1e2 and 1e3", scale_l2, 0.9, 1.1))
    odd = ev.check_admissible(ev.example_v0(20, grid), 0.25)
    out.append(Check(g, "odd data satisfy both moment constraints", odd["constraint_1"] and odd["constraint_2"], 0.0, 0.0))
    sine = ev.check_admissible(grid.sample(np.sin), 0.25)
    out.append(Check(g, "sin fails the L1/L2 inequality", not sine["inequality"], 0.0, 0.0))
    return out


# ---------------------------------------------------------------- spectrum


def quadratic_form_mismatch(rng: np.random.Generator, n_trials: int = 10, n_modes: int = 16) -> float:
    a = sp.build_matrix(n_modes)
    grid = PeriodicGrid(4096)
    worst = 0.0
    for _ in range(n_trials):
        half = rng.normal(size=n_modes) + 1j * rng.normal(size=n_modes)
        c = np.concatenate([np.conj(half[::-1]), half])  # modes -N..-1, 1..N
        full = np.concatenate([c[:n_modes], [0.0], c[n_modes:]])
        v = idft(FourierSeries(n_modes, full), grid)
        galerkin = 2 * PI * float(np.real(np.conj(c) @ a.entries @ c))
        direct = ev.linear_energy(v)
        worst = max(worst, abs(galerkin - direct) / abs(direct))
    return worst


def suite_spectrum(rng: np.random.Generator) -> list[Check]:
    g = "spectrum"
    t0 = time.perf_counter()
    root = sp.transcendental_root()
    elapsed = time.perf_counter() - t0
    out = [
        _le(g, "transcendental root vs -0.2262", abs(root + 0.2262), 5e-5),
        _le(g, "transcendental root runtime [s]", elapsed, 1e-3),
        _le(g, "zero-mean function at the root", abs(sp.zero_mean_fn(root)), 1e-9),
    ]
    lam = np.linspace(-50, -1e-6, 10_000)
    f = np.array([sp.transcendental_fn(x) for x in lam])
    out.append(Check(g, "one sign change on [-50, 0)", int(np.count_nonzero(np.diff(np.sign(f)))) == 1, 0.0, 0.0))
    upper = np.linspace(sp.BAND_EDGE, 1e3, 10_001)[1:]
    zm = max(sp.zero_mean_fn(x) for x in upper)
    out.append(_le(g, "no zero above the band", zm + 0.75, 0.0))
    res = sp.eigen_solve(sp.build_matrix(256))
    out.append(Check(g, "one eigenvalue < -1e-3, N=256", res.count_below(-1e-3) == 1, res.count_below(-1e-3), 1.0))
    out.append(_le(g, "Galerkin lambda1 vs root, N=256", abs(res.lambda1 - root), 1e-2))
    out.append(_within(g, "band low edge, N=256", res.band[0], -1e-2, sp.BAND_EDGE + 1e-2))
    out.append(_within(g, "band high edge, N=256", res.band[1], -1e-2, sp.BAND_EDGE + 1e-2))
    errs = [abs(sp.eigen_solve(sp.build_matrix(n)).lambda1 - root) for n in (64, 128, 256, 512)]
    mono = all(errs[i + 1] <= errs[i] + 1e-6 for i in range(3))
    out.append(Check(g, "lambda1 refines with N", mono, errs[-1], 1e-6))
    out.append(_le(g, "Galerkin quadratic form vs linear energy", quadratic_form_mismatch(rng), 1e-8))
    grid = PeriodicGrid(8192)
    w = sp.eigenfunction_w2(root, grid)
    out.append(_le(g, "mean of w2 at the root, m=8192", abs(w.mean()), 1e-6))
    out.append(_le(g, "eigen-residual of w2, m=8192", sp.residual_eigenpair(root, w), 1e-4))
    out.append(_le(g, "eigen-residual of U*' at 0", sp.residual_eigenpair(0.0, sp.interior_smoothed_derivative(grid)), 1e-2))
    return out


def run_all(seed: int = 0, log: Callable[[str], None] | None = None) -> list[Check]:
    """Run every suite; ``log`` receives each report line as it is produced."""
    rng = np.random.default_rng(seed)
    checks: list[Check] = []

    def add(batch):
        for c in batch:
            checks.append(c)
            if log:
                log(c.line())

    add(suite_periodic(rng))
    family = smooth_family()
    add(suite_waves(family))
    add(suite_no_cusp(family))
    add(suite_truncated(rng))
    add(suite_full())
    add(suite_spectrum(rng))
    return checks
