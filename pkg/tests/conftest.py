import hypothesis
import numpy as np
import pytest

from qht.hermitian import DensityOperator

hypothesis.settings.register_profile(
    "suite", max_examples=50, deadline=None,
    suppress_health_check=[hypothesis.HealthCheck.too_slow])
hypothesis.settings.load_profile("suite")


def random_hermitian(rng, dim):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / 2


def random_density(rng, dim, min_eig=0.0):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = a @ a.conj().T + min_eig * dim * np.eye(dim)
    return DensityOperator(m / np.trace(m).real)


@pytest.fixture
def rng():
    return np.random.default_rng(20250809)
