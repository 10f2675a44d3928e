import numpy as np
import pytest

BELL_PSI_PLUS = np.zeros((4, 4), dtype=complex)
BELL_PSI_PLUS[1:3, 1:3] = 0.5          # (|01> + |10>)/sqrt(2)

MAX_MIXED = np.eye(4, dtype=complex) / 4


def random_pure_state(rng):
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def random_two_qubit_state(rng, n_pure=4):
    """Mixture of random pure states with random weights."""
    w = rng.random(n_pure)
    w /= w.sum()
    rho = sum(p * random_pure_state(rng) for p in w)
    return (rho + rho.conj().T) / 2


def random_unitary2(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_product_mixed(rng):
    """One random single-qubit mixed state."""
    w = rng.random(2)
    w /= w.sum()
    rho = np.zeros((2, 2), dtype=complex)
    for p in w:
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        v /= np.linalg.norm(v)
        rho += p * np.outer(v, v.conj())
    return (rho + rho.conj().T) / 2


def random_separable_state(rng, n_terms=4):
    """sum_i p_i rho_A^i x rho_B^i."""
    w = rng.random(n_terms)
    w /= w.sum()
    rho = np.zeros((4, 4), dtype=complex)
    for p in w:
        rho += p * np.kron(random_product_mixed(rng), random_product_mixed(rng))
    return (rho + rho.conj().T) / 2


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
