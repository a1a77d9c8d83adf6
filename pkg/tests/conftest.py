"""
Pytest configuration and fixtures
"""

from pathlib import Path

import numpy as np
import pytest
from loguru import logger

from qadd.core.random import make_rng, random_density_matrix
from qadd.services.capacity_service import CapacityService

# Seed shared by all sampled fixtures
TEST_SEED = 1234


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator, fresh for every test"""
    return make_rng(TEST_SEED, 0)


@pytest.fixture
def qubit_state(rng: np.random.Generator) -> np.ndarray:
    """Full-rank random qubit density matrix"""
    return random_density_matrix(rng, 2)


@pytest.fixture
def qutrit_state(rng: np.random.Generator) -> np.ndarray:
    """Full-rank random qutrit density matrix"""
    return random_density_matrix(rng, 3)


@pytest.fixture
def capacity_service() -> CapacityService:
    """Capacity service with a small optimizer budget"""
    return CapacityService(seed=TEST_SEED, restarts=3, max_iterations=3000)


@pytest.fixture
def out_dir(tmp_path: Path) -> Path:
    """Directory for experiment outputs"""
    path = tmp_path / "out"
    path.mkdir()
    return path


@pytest.fixture(autouse=True)
def quiet_logs():
    """Drop handlers installed by CLI runs once a test finishes"""
    yield
    logger.remove()
