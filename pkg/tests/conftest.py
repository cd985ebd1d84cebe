"""
Shared fixtures for the test suite.
"""
import numpy as np
import pytest

from tests.oracles import random_pair, random_prim


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240521)


@pytest.fixture
def prim_batch(rng: np.random.Generator) -> np.ndarray:
    return random_prim(rng, 1000)


@pytest.fixture
def interface_pairs(rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    return random_pair(rng, 10000)


@pytest.fixture
def isolated_settings(tmp_path, monkeypatch):
    """Point the reference cache into a temporary folder."""
    from mhd_esfv.core.config import settings

    monkeypatch.setattr(settings, "reference_dir", tmp_path / "reference")
    return settings
