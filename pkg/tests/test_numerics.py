import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mpsbell import numerics

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)


def naive_matmul(a, b):
    """Triple-loop reference product."""
    out = np.zeros((a.shape[0], b.shape[1]), dtype=complex)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            for k in range(a.shape[1]):
                out[i, j] += a[i, k] * b[k, j]
    return out


def test_matmul_identity():
    m = np.array([[1.0, 2.0], [3.0, 4.0]])
    np.testing.assert_array_equal(numerics.matmul(np.eye(2), m), m)


def test_matmul_nilpotent():
    e21 = np.array([[0.0, 0.0], [1.0, 0.0]])
    np.testing.assert_array_equal(numerics.matmul(e21, e21), np.zeros((2, 2)))


def test_matmul_against_triple_loop(rng):
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    np.testing.assert_allclose(numerics.matmul(a, b), naive_matmul(a, b),
                               rtol=1e-13, atol=1e-13)


def test_matmul_dimension_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        numerics.matmul(np.eye(2), np.eye(3))


def test_matmul_rejects_nan():
    bad = np.array([[np.nan, 0.0], [0.0, 1.0]])
    with pytest.raises(ValueError, match="non-finite"):
        numerics.matmul(bad, np.eye(2))


def test_matmul_associativity(rng):
    for _ in range(20):
        a, b, c = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
                   for _ in range(3))
        lhs = numerics.matmul(numerics.matmul(a, b), c)
        rhs = numerics.matmul(a, numerics.matmul(b, c))
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * np.max(np.abs(lhs))


def test_kron_identity():
    np.testing.assert_array_equal(numerics.kron(np.eye(2), np.eye(2)), np.eye(4))


def test_kron_sigma_x():
    expected = np.fliplr(np.eye(4))
    np.testing.assert_array_equal(numerics.kron(SX, SX), expected)


def test_kron_block_ordering():
    a = np.array([[1.0, 2.0], [3.0, 4.0]])
    b = np.array([[5.0, 6.0], [7.0, 8.0]])
    k = numerics.kron(a, b)
    assert k[0, 0] == a[0, 0] * b[0, 0]
    assert k[1, 2] == a[0, 1] * b[1, 0]   # (a x b)[iR+k, jC+l] = a[i,j] b[k,l]
    assert k[3, 3] == a[1, 1] * b[1, 1]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_kron_mixed_product(seed):
    rng = np.random.default_rng(seed)
    a, b, c, d = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
                  for _ in range(4))
    lhs = numerics.kron(a @ c, b @ d)
    rhs = numerics.kron(a, b) @ numerics.kron(c, d)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(1.0, np.max(np.abs(lhs)))


def test_eig_general_ordering():
    w, _, _ = numerics.eig_general(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_allclose(w, [3.0, 2.0, 1.0], atol=1e-14)


def test_eig_general_tie_break_by_real_part():
    w, _, _ = numerics.eig_general(SX)
    np.testing.assert_allclose(w, [1.0, -1.0], atol=1e-14)


def test_eig_general_residuals(rng):
    for _ in range(10):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        w, vr, vl = numerics.eig_general(m)
        scale = np.linalg.norm(m)
        for i in range(4):
            assert np.linalg.norm(m @ vr[:, i] - w[i] * vr[:, i]) <= 1e-9 * scale
            assert np.linalg.norm(vl[:, i] @ m - w[i] * vl[:, i]) <= 1e-9 * scale


def test_eig_general_biorthonormal(rng):
    m = rng.normal(size=(4, 4))
    w, vr, vl = numerics.eig_general(m)
    for i in range(4):
        assert abs(vl[:, i] @ vr[:, i] - 1.0) < 1e-10


def test_eig_general_requires_square():
    with pytest.raises(ValueError, match="square"):
        numerics.eig_general(np.ones((2, 3)))


def test_eig_hermitian_pauli_z():
    w, _ = numerics.eig_hermitian(SZ)
    np.testing.assert_allclose(w, [-1.0, 1.0], atol=1e-14)


def test_eig_hermitian_maximally_mixed():
    w, v = numerics.eig_hermitian(np.eye(4) / 4)
    np.testing.assert_allclose(w, [0.25] * 4, atol=1e-14)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(4), atol=1e-10)


def test_eig_hermitian_reconstruction(rng):
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = (m + m.conj().T) / 2
    w, v = numerics.eig_hermitian(h)
    np.testing.assert_allclose((v * w) @ v.conj().T, h, atol=1e-10)
    assert abs(w.sum() - np.trace(h).real) <= 1e-10


def test_eig_hermitian_rejects_non_hermitian():
    with pytest.raises(ValueError, match="Hermitian"):
        numerics.eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))
