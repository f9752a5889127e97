import pytest

from ghzsim import CapacitanceNetwork, ControlSettings, derive_energies


@pytest.fixture(scope="session")
def network():
    return CapacitanceNetwork((600.0, 600.0, 600.0), (0.6, 0.6, 0.6), (30.0, 30.0))


@pytest.fixture(scope="session")
def settings():
    return ControlSettings((0.5, 0.5, 0.5), (0.5, 0.5, 0.5), (5.6, 5.6, 5.6))


@pytest.fixture(scope="session")
def energies(network, settings):
    return derive_energies(network, settings)
