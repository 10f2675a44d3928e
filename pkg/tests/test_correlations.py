import math

import numpy as np
import pytest

from mpsbell import (
    InvalidStateError,
    bcf,
    bcf_bruteforce,
    chsh_expectation,
    classical_correlation,
    classify,
    concurrence,
    correlation_tensor,
    discord,
    ladder_family,
    mutual_information,
    partial_trace,
    rdm_pair_auto,
    spin_flip,
    three_body_family,
    von_neumann_entropy,
    xyz_family,
    closed_form_rdm,
    RUNG,
)
from mpsbell.correlations import PAULIS, TSIRELSON

from conftest import (
    BELL_PSI_PLUS,
    MAX_MIXED,
    random_pure_state,
    random_separable_state,
    random_two_qubit_state,
    random_unitary2,
)


# --- correlation tensor and BCF ------------------------------------------------

def test_correlation_tensor_maximally_mixed():
    np.testing.assert_allclose(correlation_tensor(MAX_MIXED), np.zeros((3, 3)),
                               atol=1e-14)


def test_correlation_tensor_bell():
    np.testing.assert_allclose(correlation_tensor(BELL_PSI_PLUS),
                               np.diag([1.0, 1.0, -1.0]), atol=1e-14)


def test_correlation_tensor_vs_elementwise_sum(rng):
    # independent oracle: expectation values as explicit 16-term sums
    rho = closed_form_rdm(ladder_family(1.0), 0.3, RUNG)
    L = correlation_tensor(rho)
    for i, si in enumerate(PAULIS):
        for j, sj in enumerate(PAULIS):
            op = np.kron(si, sj)
            val = sum(rho[a, b] * op[b, a] for a in range(4) for b in range(4))
            assert abs(L[i, j] - val.real) < 1e-12


def test_bcf_bell():
    assert bcf(BELL_PSI_PLUS) == pytest.approx(TSIRELSON, abs=1e-12)


def test_bcf_maximally_mixed():
    assert bcf(MAX_MIXED) == pytest.approx(0.0, abs=1e-12)


def test_bcf_diagonal_states(rng):
    # classical states: B = 2 |p1 + p4 - p2 - p3|
    for _ in range(25):
        p = rng.random(4)
        p /= p.sum()
        rho = np.diag(p).astype(complex)
        expected = 2.0 * abs(p[0] + p[3] - p[1] - p[2])
        assert bcf(rho) == pytest.approx(expected, abs=1e-10)
        assert bcf_bruteforce(rho) == pytest.approx(expected, abs=1e-6)


def test_bcf_bruteforce_bell():
    assert bcf_bruteforce(BELL_PSI_PLUS) == pytest.approx(TSIRELSON, abs=1e-5)


def test_bcf_bruteforce_product_state():
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1.0   # |00><00| saturates but cannot violate
    assert bcf_bruteforce(rho) == pytest.approx(2.0, abs=1e-5)


def test_bcf_agrees_with_bruteforce(rng):
    for _ in range(60):
        rho = random_two_qubit_state(rng)
        assert abs(bcf(rho) - bcf_bruteforce(rho)) <= 1e-4


def test_chsh_expectation_tsirelson_directions():
    x, y = (1.0, 0.0, 0.0), (0.0, 1.0, 0.0)
    s = 1.0 / math.sqrt(2.0)
    b1, b2 = (s, s, 0.0), (s, -s, 0.0)
    assert chsh_expectation(BELL_PSI_PLUS, x, y, b1, b2) == \
        pytest.approx(TSIRELSON, abs=1e-12)


def test_chsh_expectation_never_exceeds_bcf(rng):
    rho = random_two_qubit_state(rng)
    bound = bcf(rho)
    for _ in range(50):
        dirs = rng.normal(size=(4, 3))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        assert abs(chsh_expectation(rho, *dirs)) <= bound + 1e-9


# --- spin flip and concurrence --------------------------------------------------

def test_spin_flip_bell_invariant():
    np.testing.assert_allclose(spin_flip(BELL_PSI_PLUS), BELL_PSI_PLUS, atol=1e-14)


def test_spin_flip_flips_product_state():
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1.0
    flipped = np.zeros((4, 4), dtype=complex)
    flipped[3, 3] = 1.0
    np.testing.assert_allclose(spin_flip(rho), flipped, atol=1e-14)


def test_spin_flip_trace(rng):
    rho = random_two_qubit_state(rng)
    assert np.trace(spin_flip(rho)) == pytest.approx(np.trace(rho.conj()).real,
                                                     abs=1e-12)


def test_concurrence_bell():
    assert concurrence(BELL_PSI_PLUS) == pytest.approx(1.0, abs=1e-12)


def test_concurrence_xyz_always_zero():
    fam = xyz_family()
    for g in (-1.5, -0.3, 0.4, 1.0, 1.8):
        rho, _ = rdm_pair_auto(fam.matrix_fn(g), 1)
        assert concurrence(rho) == pytest.approx(0.0, abs=1e-10)


def test_concurrence_three_body_entangled_but_local():
    rho, _ = rdm_pair_auto(three_body_family().matrix_fn(0.5), 1)
    assert concurrence(rho) > 0.2
    assert bcf(rho) <= 2.0 + 1e-9


def test_concurrence_separable(rng):
    for _ in range(25):
        assert concurrence(random_separable_state(rng)) <= 1e-8


# --- entropies, mutual information, discord -------------------------------------

def test_entropy_pure_state(rng):
    assert von_neumann_entropy(random_pure_state(rng)) == pytest.approx(0.0, abs=1e-10)


def test_entropy_maximally_mixed():
    assert von_neumann_entropy(MAX_MIXED) == pytest.approx(2.0, abs=1e-12)


def test_entropy_binary_uniform():
    assert von_neumann_entropy(np.diag([0.5, 0.5, 0.0, 0.0])) == \
        pytest.approx(1.0, abs=1e-12)


def test_mutual_information_product_state(rng):
    rho = np.kron(np.diag([0.3, 0.7]), np.diag([0.6, 0.4])).astype(complex)
    assert mutual_information(rho) == pytest.approx(0.0, abs=1e-10)


def test_mutual_information_bell():
    assert mutual_information(BELL_PSI_PLUS) == pytest.approx(2.0, abs=1e-12)


def test_mutual_information_classical():
    rho = np.diag([0.5, 0.0, 0.0, 0.5]).astype(complex)
    assert mutual_information(rho) == pytest.approx(1.0, abs=1e-12)


def test_classical_correlation_product_state():
    rho = np.kron(np.diag([0.3, 0.7]), np.diag([0.6, 0.4])).astype(complex)
    assert classical_correlation(rho) == pytest.approx(0.0, abs=1e-9)


def test_classical_correlation_bell():
    assert classical_correlation(BELL_PSI_PLUS) == pytest.approx(1.0, abs=1e-9)


def test_classical_correlation_classical_state():
    # optimum is the computational-basis measurement (theta = 0 on the grid)
    rho = np.diag([0.5, 0.0, 0.0, 0.5]).astype(complex)
    assert classical_correlation(rho) == pytest.approx(1.0, abs=1e-10)


def test_discord_classical_states(rng):
    for _ in range(20):
        p = rng.random(4)
        p /= p.sum()
        assert discord(np.diag(p).astype(complex)) <= 1e-8


def test_discord_bell():
    assert discord(BELL_PSI_PLUS) == pytest.approx(1.0, abs=1e-9)


def test_discord_three_body_decreases_with_distance():
    fam = three_body_family()
    rho2, _ = rdm_pair_auto(fam.matrix_fn(0.5), 2)
    rho4, _ = rdm_pair_auto(fam.matrix_fn(0.5), 4)
    d2, d4 = discord(rho2), discord(rho4)
    assert d2 > d4 > 0.0


def test_identity_i_equals_j_plus_d(rng):
    for _ in range(10):
        rho = random_two_qubit_state(rng)
        i = mutual_information(rho)
        j = classical_correlation(rho)
        d = discord(rho)
        assert j <= i + 1e-8
        assert abs(i - j - d) <= 1e-8


# --- classify -------------------------------------------------------------------

def test_classify_ladder_regimes():
    fam = ladder_family(1.0)
    rep = classify(closed_form_rdm(fam, 0.2, RUNG))
    assert rep.entangled and rep.nonlocal_
    rep = classify(closed_form_rdm(fam, 0.7, RUNG))
    assert rep.entangled and not rep.nonlocal_
    rep = classify(closed_form_rdm(fam, 1.5, RUNG))
    assert not rep.entangled and not rep.nonlocal_ and rep.discordant


def test_classify_report_invariants(rng):
    rep = classify(random_two_qubit_state(rng))
    assert 0.0 <= rep.bcf <= TSIRELSON + 1e-9
    assert 0.0 <= rep.concurrence <= 1.0
    assert rep.discord >= 0.0
    assert abs(rep.mutual_information - rep.classical_correlation - rep.discord) \
        <= 1e-8


# --- invariance properties -------------------------------------------------------

def test_local_unitary_invariance(rng):
    for _ in range(15):
        rho = random_two_qubit_state(rng)
        u = np.kron(random_unitary2(rng), random_unitary2(rng))
        rho2 = u @ rho @ u.conj().T
        rho2 = (rho2 + rho2.conj().T) / 2
        assert abs(bcf(rho) - bcf(rho2)) <= 1e-7
        assert abs(concurrence(rho) - concurrence(rho2)) <= 1e-7
        assert abs(discord(rho) - discord(rho2)) <= 1e-7


def test_gisin_pure_state_equivalence(rng):
    for _ in range(60):
        rho = random_pure_state(rng)
        c = concurrence(rho)
        b = bcf(rho)
        assert (c > 1e-6) == (b > 2.0 + 1e-6)


# --- input validation -------------------------------------------------------------

def test_rejects_non_hermitian():
    bad = np.zeros((4, 4), dtype=complex)
    bad[0, 0] = 1.0
    bad[0, 1] = 0.1
    with pytest.raises(InvalidStateError):
        bcf(bad)


def test_rejects_wrong_trace():
    with pytest.raises(InvalidStateError):
        concurrence(np.eye(4, dtype=complex))


def test_rejects_negative_state():
    bad = np.diag([1.2, -0.2, 0.0, 0.0]).astype(complex)
    with pytest.raises(InvalidStateError):
        discord(bad)


def test_partial_trace_of_kron(rng):
    a = np.diag([0.25, 0.75]).astype(complex)
    b = np.array([[0.5, 0.1], [0.1, 0.5]], dtype=complex)
    np.testing.assert_allclose(partial_trace(np.kron(a, b), keep=0), a, atol=1e-14)
    np.testing.assert_allclose(partial_trace(np.kron(a, b), keep=1), b, atol=1e-14)
