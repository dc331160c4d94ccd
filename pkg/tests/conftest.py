import numpy as np
import pytest


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_center(rng: np.random.Generator, n: int, radius: float = 0.6) -> np.ndarray:
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    a /= np.linalg.norm(a)
    return a * rng.uniform(0.1, radius)


def random_diagonal_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    return np.diag(np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size=n)))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
