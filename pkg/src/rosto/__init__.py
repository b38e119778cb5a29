"""Numerics for the peaked periodic wave of the reduced Ostrovsky equation and its linear instability."""

from .periodic import PeriodicGrid, Profile, FourierSeries
from .wave import C_STAR, BAND_EDGE, GROWTH_RATE, peaked_profile, smooth_wave_solve
from .characteristics import CharMap, char_position, char_jacobian
from .evolution import evolve, example_v0, example_v0_norms, check_admissible
from .spectral import build_matrix, eigen_solve, transcendental_root

__version__ = "0.1.0"
