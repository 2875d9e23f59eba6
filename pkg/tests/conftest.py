"""
Pytest configuration and shared fixtures
"""

import pytest

from erasure_rate_kit.models import CellularParams, ChannelParams, FirFilter


def pytest_configure(config):
    """Register custom markers."""
    config.addinivalue_line("markers", "slow: acceptance-scale checks")


@pytest.fixture
def fig2_channel():
    """The g0=0.8, g1=0.2, P=10 channel (a = 11, b = 4)."""
    return ChannelParams(g0=0.8, g1=0.2, snr=10.0)


@pytest.fixture
def fig2_filter():
    return FirFilter.two_tap(0.8, 0.2)


@pytest.fixture
def fig5_cell():
    """alpha^2 = 0.5 at P = 14 dB."""
    return CellularParams(alpha_sq=0.5, snr=10.0**1.4, q=0.3)


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    """Keep environment overrides from leaking between tests."""
    monkeypatch.delenv("ERK_DENSE_CAP", raising=False)
    monkeypatch.delenv("ERK_VALIDATE_TOLERANCE_SCALE", raising=False)
