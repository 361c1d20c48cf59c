"""Shared fixtures for expensive geometry, built once per session."""

import pytest

from rotaplex.tsp_tt import flat_tt_fan


@pytest.fixture(scope="session")
def tt_fan_5():
    return flat_tt_fan(5)
