import numpy as np
import pytest

from weakmeas import DensityMatrix, HermitianObservable, MeasurementModel
from weakmeas.states import PLUS_X, SZ, random_hermitian, random_mixed_matrix, random_pure_vector


def spin_model(delta):
    return MeasurementModel(HermitianObservable(SZ), delta)


def random_scenario(seed, dim=None, delta=None, pure=None):
    """Seeded (model, rho) pair; observables are scaled to an O(1) spectrum."""
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(2, 7)) if dim is None else dim
    delta = float(rng.choice([0.1, 0.5, 2.0])) if delta is None else delta
    pure = bool(rng.integers(2)) if pure is None else pure
    obs = HermitianObservable(random_hermitian(dim, rng, scale=1 / np.sqrt(dim)))
    rho = random_pure_vector(dim, rng) if pure else random_mixed_matrix(dim, rng)
    rho = DensityMatrix.pure(rho) if pure else DensityMatrix(rho)
    return MeasurementModel(obs, delta), rho


@pytest.fixture
def plus_x():
    return DensityMatrix.pure(PLUS_X)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
