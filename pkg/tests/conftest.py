import numpy as np
import pytest

from pass_isac import SystemConfig
from pass_isac.experiments import point_config, sample_scene


@pytest.fixture
def cfg():
    """Default evaluation configuration (28 GHz, 40 m span, 10 elements)."""
    return SystemConfig()


@pytest.fixture
def scene_factory():
    """Deterministic scene sampler bound to the evaluation rectangle."""

    def make(seed: int, d_x: float = 40.0, d_y: float = 8.0):
        rng = np.random.default_rng(seed)
        return sample_scene(d_x, d_y, rng)

    return make


@pytest.fixture
def sized_cfg():
    """Configuration with span and element counts overridden per test."""

    def make(d_x: float = 40.0, count: int = 10, **overrides):
        base = point_config(SystemConfig(**overrides), d_x, count)
        return base

    return make
