import math

import numpy as np
import pytest

from steklov_annulus import Annulus, bipolar_frame, normalize, series_from_eigvec
from steklov_annulus.spectral import finite_section, smallest_eigpair


@pytest.fixture(scope="session")
def frame_131():
    return bipolar_frame(Annulus(1.0, 3.0, 1.0))


@pytest.fixture(scope="session")
def frame_1312():
    return bipolar_frame(Annulus(1.0, 3.0, 1.2))


@pytest.fixture(scope="session")
def eig_1312(frame_1312):
    return smallest_eigpair(finite_section(frame_1312, 64))


@pytest.fixture(scope="session")
def series_1312(frame_1312, eig_1312):
    return series_from_eigvec(frame_1312, eig_1312)


@pytest.fixture(scope="session")
def normalized_1312(series_1312):
    return normalize(series_1312)


@pytest.fixture(scope="session")
def thetas():
    return np.linspace(-math.pi, math.pi, 512, endpoint=False) + math.pi / 512
