import math

import numpy as np
import pytest

from rosto import wave as wv
from rosto.periodic import PeriodicGrid, antiderivative, project_zero_mean

PI = math.pi


@pytest.fixture(scope="module")
def family():
    grid = PeriodicGrid(4096)
    return {c: wv.smooth_wave_solve(c, grid) for c in (1.01, 1.05, 1.09, wv.C_STAR - 1e-4)}


def test_constants():
    k = wv.WaveConstants()
    assert abs(k.c_star - 1.0966227) < 1e-6
    assert k.band_edge == PI**2 / 6 and k.growth_rate == PI / 6 and k.peak_slope == PI / 3
    assert abs(wv.E_STAR - PI**6 / 4374) < 1e-15


def test_peaked_profile_values():
    g = PeriodicGrid(1024)
    raw = wv.peaked_profile(g, project=False)
    assert abs(wv.peaked_formula(0.0) + PI**2 / 18) < 1e-15
    assert abs(raw.values[0] - wv.C_STAR) < 1e-15
    u = wv.peaked_profile(g)
    assert u.is_zero_mean()
    assert np.max(np.abs(u.values[1:] - u.values[1:][::-1])) < 1e-14


def test_first_integral_examples():
    p = wv.peaked_params()
    assert abs(wv.first_integral(p, -PI**2 / 18, 0.0) - PI**6 / 4374) < 1e-9
    assert wv.first_integral(p, 0.0, 0.0) == 0.0
    z = np.linspace(-3.0, 3.0, 101)
    e = wv.first_integral(p, wv.peaked_formula(z), z / 3)
    assert np.max(np.abs(e - wv.E_STAR)) < 1e-9


def test_smooth_wave_range():
    g = PeriodicGrid(64)
    for c in (1.0, 0.9, wv.C_STAR, 1.2):
        with pytest.raises(ValueError):
            wv.smooth_wave_solve(c, g)


def test_smooth_family_properties(family):
    amps = []
    for c, (u, params) in family.items():
        assert 0 < params.e_level < c**3 / 6
        assert abs(wv.half_period(c, params.e_level) - PI) <= 1e-10
        assert abs(u.mean()) <= 1e-10
        assert np.max(np.abs(u.values[1:] - u.values[1:][::-1])) <= 1e-10
        assert np.all(u.values < c)
        assert int(np.argmin(u.values)) == u.grid.m // 2
        d = np.diff(np.append(u.values, u.values[0]))
        assert np.count_nonzero(np.diff(np.sign(d[d != 0])) != 0) == 1
        e = wv.first_integral_profile(c, u)
        assert np.ptp(e) <= 1e-8 * params.e_level
        amps.append(np.max(np.abs(u.values)))
    assert np.all(np.diff(amps) > 0)


def test_smooth_residuals(family):
    for c in (1.01, 1.05, 1.09):
        u, _ = family[c]
        assert np.max(np.abs(wv.residual(c, u).values)) <= 1e-6


def test_upper_end_of_family(family):
    c = wv.C_STAR - 1e-4
    u, params = family[c]
    assert abs(u.values.max() - c) <= 1e-2
    assert abs(params.e_level - c**3 / 6) <= 1e-3
    assert np.max(np.abs(wv.residual(c, u).values)[2:-1]) <= 1e-3


def test_peaked_residual_decreases_with_m():
    res = [np.max(np.abs(wv.residual(wv.C_STAR, wv.peaked_profile(PeriodicGrid(m))).values)[2:-1]) for m in (1024, 4096)]
    assert res[1] < res[0] and res[1] <= 1e-3


def test_sqrt_profile_residual_diverges():
    r = [np.max(np.abs(wv.residual(wv.C_STAR, wv.sqrt_singular_profile(PeriodicGrid(m))).values)) for m in (1024, 4096, 16384)]
    assert r[1] / r[0] >= 2 and r[2] / r[1] >= 2


def test_holder_exponents(family):
    g = PeriodicGrid(4096)
    assert 0.98 <= wv.holder_exponent(wv.peaked_profile(g), wv.C_STAR) <= 1.02
    assert 0.48 <= wv.holder_exponent(wv.sqrt_singular_profile(g)) <= 0.52
    u, _ = family[1.05]
    assert 1.95 <= wv.holder_exponent(u, float(u.values.max())) <= 2.05


def test_holder_needs_resolution():
    with pytest.raises(ValueError):
        wv.holder_exponent(wv.peaked_profile(PeriodicGrid(32)), wv.C_STAR)


def test_energy_momentum():
    g = PeriodicGrid(512)
    assert wv.energy_momentum(g.sample(lambda z: 0 * z)) == (0.0, 0.0)
    h, q = wv.energy_momentum(g.sample(np.cos))
    assert abs(q - PI) < 1e-12 and abs(h + PI) < 1e-12
    _, q = wv.energy_momentum(wv.peaked_profile(PeriodicGrid(8192)))
    assert abs(q - 2 * PI**5 / 405) <= 1e-6


def test_phase_plane():
    c = wv.C_STAR
    rows = wv.phase_plane_data(c, [0.0, c**3 / 6])
    top = [(u, up) for e, u, up, _ in rows if e == c**3 / 6]
    assert any(abs(u + c / 2) < 1e-12 and abs(up) < 1e-6 for u, up in top)
    near = [abs(up) for u, up in top if c - 0.02 < u < c]
    assert abs(max(near) - PI / 3) < 1e-2
    bounded = [(u, up) for e, u, up, _ in rows if e == 0.0 and u > -c / 2]
    assert all(abs(u) < 1e-12 and up == 0 for u, up in bounded)
    with pytest.raises(ValueError):
        wv.phase_plane_data(-1.0, [0.1])


def test_antiderivative_matches_ode_for_peaked():
    g = PeriodicGrid(4096)
    u = wv.peaked_profile(g)
    z = g.nodes[1:]
    # (c* - U*) U*' = -antiderivative(U*) away from the peak
    expected = -(wv.C_STAR - wv.peaked_formula(z)) * z / 3
    assert np.max(np.abs(antiderivative(u).values[1:] - expected)) < 1e-6
