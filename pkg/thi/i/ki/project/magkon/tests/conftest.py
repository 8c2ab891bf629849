from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from core.fock_core import FockConfig
from core.hamiltonians import SystemParams

# Dichte Diagonalisierungen dauern länger als die Hypothesis-Standardfrist.
settings.register_profile(
    "magkon",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("magkon")


@pytest.fixture
def params() -> SystemParams:
    """Störungstheoretischer Standardsatz Δ_a = 1, Δ_m = 1.7, g = G = 0.1."""
    return SystemParams.from_detunings(1.0, 1.7, 0.1, 0.1)


@pytest.fixture
def schwach() -> SystemParams:
    return SystemParams.from_detunings(1.0, 1.7, 0.05, 0.05)


@pytest.fixture
def config() -> FockConfig:
    return FockConfig((4, 4, 4))

