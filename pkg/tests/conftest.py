import numpy as np
import pytest

from tsadvisor.series import TimeSeries


@pytest.fixture
def anchor_sinusoid() -> TimeSeries:
    """Unit sinusoid with period 24 over 336 points: the analytical anchor
    used throughout the acceptance suite."""
    t = np.arange(336)
    return TimeSeries("sin24", np.sin(2 * np.pi * t / 24))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
