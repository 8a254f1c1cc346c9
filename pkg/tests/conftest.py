import numpy as np
import pytest

from robustaug.imgcorrupt import reference_suite


@pytest.fixture(scope="session")
def small_suite():
    """Three 64x64 reference images; enough texture for fast operator tests."""
    return reference_suite(3, 64)


@pytest.fixture(scope="session")
def gray_image():
    """Constant mid-gray 100x100 image."""
    return np.full((100, 100, 3), 0.5)


@pytest.fixture(scope="session")
def gray_256():
    """Constant mid-gray 256x256 image for statistical oracles."""
    return np.full((256, 256, 3), 0.5)
