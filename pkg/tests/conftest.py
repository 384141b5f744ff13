import numpy as np
import pytest

from emcavity.constants import TWO_PI
from emcavity.params import CavityParams, Occupations, TripartiteParams


@pytest.fixture
def reference_cavity():
    """One-sided microwave cavity at the fitted device working point."""
    return CavityParams(
        omega_c=TWO_PI * 10.29184e9,
        kappa_in=TWO_PI * 0.41e6,
        kappa_ex=TWO_PI * 1.45e6,
    )


@pytest.fixture
def reference_tripartite():
    """Entangling working point: both pumps on the lower sideband."""
    return TripartiteParams(
        delta_a=-TWO_PI * 4.0e6,
        delta_c=-TWO_PI * 4.0e6,
        omega_m=TWO_PI * 4.0e6,
        g_b=TWO_PI * 2.78e6,
        g_c=TWO_PI * 6.43e6,
        kappa_a_in=TWO_PI * 0.8e6,
        kappa_a_ex=TWO_PI * 1.2e6,
        kappa_c_in=TWO_PI * 0.8e6,
        kappa_c_ex=TWO_PI * 1.2e6,
        gamma=TWO_PI * 100.0,
        occupations=Occupations(),
    )


def random_tripartite(rng: np.random.Generator, g_b_max_hz=5e6) -> TripartiteParams:
    """Random draw over the experimentally sensible parameter box."""
    return TripartiteParams(
        delta_a=TWO_PI * rng.uniform(-8e6, 8e6),
        delta_c=TWO_PI * rng.uniform(-8e6, 8e6),
        omega_m=TWO_PI * rng.uniform(1e6, 8e6),
        g_b=TWO_PI * rng.uniform(0.0, g_b_max_hz),
        g_c=TWO_PI * rng.uniform(0.0, 8e6),
        kappa_a_in=TWO_PI * rng.uniform(1e5, 2e6),
        kappa_a_ex=TWO_PI * rng.uniform(1e5, 2e6),
        kappa_c_in=TWO_PI * rng.uniform(1e5, 2e6),
        kappa_c_ex=TWO_PI * rng.uniform(1e5, 2e6),
        gamma=TWO_PI * rng.uniform(1e4, 1e5),
        occupations=Occupations(
            n_a_in=rng.uniform(0.0, 2.0),
            n_a_ex=rng.uniform(0.0, 2.0),
            n_b_in=rng.uniform(0.0, 50.0),
            n_c_in=rng.uniform(0.0, 2.0),
            n_c_ex=rng.uniform(0.0, 2.0),
        ),
    )
