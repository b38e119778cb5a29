import math

import numpy as np
import pytest

from rosto import characteristics as ch
from rosto import evolution as ev
from rosto import spectral as sp
from rosto.periodic import PeriodicGrid, interp, norm_l1, norm_l2, project_zero_mean
from rosto.wave import GROWTH_RATE

PI = math.pi


def test_example_v0_shape():
    g = PeriodicGrid(1024)
    v = ev.example_v0(20.0, g)
    assert v.values[0] == pytest.approx(0.0, abs=1e-13)
    assert v.values[g.m // 2] == 0.0
    assert np.max(np.abs(v.values[1:] + v.values[1:][::-1])) < 1e-14
    assert v.is_zero_mean()
    with pytest.raises(ValueError):
        ev.example_v0(0.0, g)


@pytest.mark.parametrize("a", [1.0, 20.0, 100.0])
def test_closed_form_norms(a):
    v = ev.example_v0(a, PeriodicGrid(8192))
    l1, l2 = ev.example_v0_norms(a)
    assert norm_l1(v) == pytest.approx(l1, rel=1e-4)
    assert norm_l2(v) == pytest.approx(l2, rel=1e-4)


def test_norm_scaling():
    (l1a, l2a), (l1b, l2b) = ev.example_v0_norms(1e2), ev.example_v0_norms(1e3)
    ka = l1a * 1e4 / math.log(1e4)
    kb = l1b * 1e6 / math.log(1e6)
    assert 0.8 < kb / ka < 1.25
    assert l2b * 1e3**1.5 / (l2a * 1e2**1.5) == pytest.approx(1.0, abs=0.1)
    with pytest.raises(ValueError):
        ev.example_v0_norms(-1.0)


def test_admissibility_flags():
    g = PeriodicGrid(4096)
    odd = ev.check_admissible(ev.example_v0(20.0, g), 0.25)
    assert odd["constraint_1"] and odd["constraint_2"]
    assert not ev.check_admissible(g.sample(np.sin), 0.25)["inequality"]
    assert ev.inequality_threshold(0.25) == pytest.approx(0.019583, abs=1e-6)
    with pytest.raises(ValueError):
        ev.check_admissible(g.sample(np.sin), 0.5)


def test_example_data_is_not_admissible_at_moderate_a():
    # ||v0||_1 / ||v0||_2 decays only like log(a) / sqrt(a)
    g = PeriodicGrid(8192)
    assert not ev.check_admissible(ev.example_v0(100.0, g), 0.25)["inequality"]
    for a in (20.0, 100.0, 1e4):
        assert ev.largest_admissible_C(*ev.example_v0_norms(a)) is None
    c = ev.largest_admissible_C(*ev.example_v0_norms(1e8))
    assert c is not None and 0 < c < 0.5
    l1, l2 = ev.example_v0_norms(1e8)
    assert l1 <= ev.inequality_threshold(c) * l2 * (1 + 1e-12)


def test_linear_energy_examples():
    g = PeriodicGrid(4096)
    assert ev.linear_energy(g.sample(lambda z: 0 * z)) == 0.0
    d = sp.interior_smoothed_derivative(g)
    assert abs(ev.linear_energy(d)) <= 1e-2 * norm_l2(d) ** 2
    # sin z is the odd combination of modes +-1; its Galerkin form is the odd block entry
    _, odd = sp.build_matrix(8).parity_blocks()
    assert ev.linear_energy(g.sample(np.sin)) == pytest.approx(PI * odd[0, 0], rel=1e-6)


def test_zero_data_stays_zero():
    g = PeriodicGrid(256)
    lab = ev.LabelGrid.for_horizon(1.0, 1024)
    st = ev.initial_state(g.sample(lambda z: 0 * z), lab)
    for _ in range(3):
        st = ev.step(st, 0.01)
    assert np.all(st.v_labels == 0)
    with pytest.raises(ValueError):
        ev.step(st, 0.0)


def test_step_without_source_is_fourth_order():
    g = PeriodicGrid(1024)
    v0 = ev.example_v0(20.0, g)
    lab = ev.LabelGrid.for_horizon(1.0, 4096)
    st = ev.initial_state(v0, lab)
    err = [np.max(np.abs(ev.step(st, dt, source=False).v_labels - ev.truncated_labels(v0, lab, dt))) for dt in (0.4, 0.2)]
    assert err[0] / err[1] > 25
    assert np.max(np.abs(ev.step(st, 1e-2, source=False).v_labels - ev.truncated_labels(v0, lab, 1e-2))) < 1e-13


def test_step_preserves_mean():
    g = PeriodicGrid(1024)
    v0 = ev.example_v0(20.0, g)
    lab = ev.LabelGrid.for_horizon(1.0, 4096)
    st = ev.step(ev.initial_state(v0, lab), 1e-2)
    d = ev.state_diagnostics(st)
    assert abs(d["mean"]) <= 1e-8 * d["l1"]


def test_truncated_labels_match_characteristics():
    g = PeriodicGrid(1024)
    v0 = ev.example_v0(20.0, g)
    lab = ev.LabelGrid.for_horizon(5.0, 8192)
    v = ev.truncated_labels(v0, lab, 5.0)
    expected = ch.growth_factor(lab.s, 5.0) * interp(v0, lab.s)
    assert np.allclose(v, expected, rtol=1e-9, atol=1e-12)


def test_growth_rate_fit_examples():
    t = np.linspace(0, 30, 300)
    rate, intercept, resid = ev.growth_rate_fit(t, 7 * np.exp(GROWTH_RATE * t))
    assert rate == pytest.approx(GROWTH_RATE, abs=1e-12) and resid <= 1e-12
    assert intercept == pytest.approx(math.log(7))
    assert ev.growth_rate_fit(t, np.full_like(t, 3.0))[0] == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(ValueError):
        ev.growth_rate_fit(t[:30], np.ones(30))
    bad = np.ones_like(t)
    bad[-1] = 0
    with pytest.raises(ValueError):
        ev.growth_rate_fit(t, bad)


def test_evolve_validation():
    g = PeriodicGrid(256)
    v0 = ev.example_v0(20.0, g)
    with pytest.raises(ValueError):
        ev.evolve(v0, 1.0, 0.02)
    with pytest.raises(ValueError):
        ev.evolve(v0, 0.0, 0.01)
    with pytest.raises(ValueError):
        ev.evolve(v0, 1.0, 0.01, mode="sideways")
    with pytest.raises(ValueError):
        ev.evolve(g.sample(lambda z: 1 + np.cos(z)), 1.0, 0.01)


def test_truncated_run_rate():
    v0 = ev.example_v0(20.0, PeriodicGrid(1024))
    run = ev.evolve(v0, 30.0, 1e-2, "truncated")
    assert abs(run.rate - GROWTH_RATE) <= 1e-3
    assert run.passed_upper
    assert np.all(run.l2[1:] >= 0.5 * run.series["upper_bound"][1:])
    assert np.allclose(run.series["l1"], run.series["l1"][0], rtol=1e-10)


def test_blow_up_guard():
    v0 = ev.example_v0(20.0, PeriodicGrid(256))
    with pytest.raises(ev.BlowUpError):
        ev.evolve(v0, 60.0, 1e-2, "truncated")


def test_source_off_matches_closed_form():
    g = PeriodicGrid(4096)
    v0 = ev.example_v0(20.0, g)
    run = ev.evolve(v0, 5.0, 1e-2, source=False)
    assert run.l2[-1] == pytest.approx(ch.truncated_norms(v0, 5.0).l2, rel=1e-6)


def test_upper_bound_for_data_that_is_not_odd():
    g = PeriodicGrid(1024)
    v0 = project_zero_mean(g.sample(lambda z: np.cos(z) + 0.3 * np.sin(2 * z) + 0.2 * np.exp(np.sin(z))))
    run = ev.evolve(v0, 8.0, 1e-2)
    assert run.passed_upper
    flags = run.admissible_flags
    assert not flags["constraint_1"]


def test_full_run_diagnostics(full_run_30):
    _, run, _ = full_run_30
    s = run.series
    n = s["t"].size
    assert all(v.size == n for v in s.values())
    assert np.all(s["g_sup"] <= s["l1"])
    assert np.max(np.abs(s["mean"]) / s["l1"]) <= 1e-6
    assert set(run.summary()) == set(ev.SUMMARY_KEYS)
    assert len(next(iter(run.rows()))) == len(ev.NORMS_HEADER)
    assert np.all(np.diff(s["t"]) > 0) and s["t"][-1] == pytest.approx(30.0)


def test_state_profile(full_run_30):
    _, run, _ = full_run_30
    prof = ev.state_profile(run.final_state)
    assert prof.grid.m == 4096 and np.all(np.isfinite(prof.values))
