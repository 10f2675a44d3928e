import numpy as np
import pytest

from mpsbell import (
    RUNG,
    closed_form_rdm,
    hamiltonian_coefficients,
    ladder_family,
    rdm_adjacent_auto,
    rdm_pair_auto,
    three_body_family,
    xyz_family,
)

BELL = np.zeros((4, 4), dtype=complex)
BELL[1:3, 1:3] = 0.5


def test_three_body_matrices():
    model = three_body_family().matrix_fn(0.5)
    np.testing.assert_array_equal(model.matrices[0], [[0, 0], [1, 1]])
    np.testing.assert_array_equal(model.matrices[1], [[1, 0.5], [0, 0]])


def test_xyz_matrices():
    model = xyz_family().matrix_fn(1.0)
    np.testing.assert_array_equal(model.matrices[0], [[1, 1], [1, 1]])
    np.testing.assert_array_equal(model.matrices[1], [[1, -1], [-1, 1]])


def test_ladder_matrices():
    model = ladder_family(1.0).matrix_fn(0.25)   # g = 2 a^2 x = 0.5
    np.testing.assert_array_equal(model.matrices[0], [[0, 0.5], [0, 0]])
    np.testing.assert_array_equal(model.matrices[1], np.eye(2))
    np.testing.assert_array_equal(model.matrices[2], np.eye(2))
    np.testing.assert_array_equal(model.matrices[3], [[0, 0], [1, 0]])


def test_ladder_rejects_zero_scale():
    with pytest.raises(ValueError):
        ladder_family(0.0)


def test_ladder_depends_only_on_x():
    # same x from different (a, g): identical rung state
    rho1, _ = rdm_adjacent_auto(ladder_family(1.0).matrix_fn(1.0), 1)   # g = 2
    rho2, _ = rdm_adjacent_auto(ladder_family(np.sqrt(2)).matrix_fn(1.0), 1)  # g = 4
    np.testing.assert_allclose(rho1, rho2, atol=1e-12)


def test_ladder_rung_is_bell_state_at_zero():
    np.testing.assert_allclose(closed_form_rdm(ladder_family(1.0), 0.0, RUNG),
                               BELL, atol=1e-14)


def test_closed_form_ladder_pattern():
    rho = closed_form_rdm(ladder_family(1.0), 0.3, RUNG)
    expected = np.diag([0.3, 1.0, 1.0, 0.3]).astype(complex)
    expected[1, 2] = expected[2, 1] = 1.0
    np.testing.assert_allclose(rho, expected / 2.6, atol=1e-14)


def test_closed_form_three_body_classical():
    rho = closed_form_rdm(three_body_family(), -0.5, 1)
    np.testing.assert_allclose(rho, np.diag([1.0, 0.5, 0.5, 1.0]) / 3.0, atol=1e-14)


def test_closed_form_three_body_distance_three():
    t = (1 - 0.5) / (1 + 0.5)   # (1+g)/(1-g) at g = -0.5
    rho = closed_form_rdm(three_body_family(), -0.5, 3)
    expected = np.diag([1 + t ** 3, 1 - t ** 3, 1 - t ** 3, 1 + t ** 3]) / 4
    np.testing.assert_allclose(rho, expected, atol=1e-14)


def test_closed_form_argument_validation():
    with pytest.raises(ValueError):
        closed_form_rdm(ladder_family(1.0), 0.3, 1)
    with pytest.raises(ValueError):
        closed_form_rdm(three_body_family(), 0.3, 0)


@pytest.mark.parametrize("family,r", [
    (ladder_family(1.0), RUNG),
    (xyz_family(), 1),
    (xyz_family(), 2),
    (three_body_family(), 1),
    (three_body_family(), 2),
    (three_body_family(), 5),
])
def test_oracle_equivalence(family, r):
    """Transfer-matrix route reproduces the closed forms (central test)."""
    grid = np.concatenate([np.linspace(-1.9, -0.04, 15),
                           np.linspace(0.04, 1.9, 15)])
    for g in grid:
        model = family.matrix_fn(g)
        if r == RUNG:
            engine, _ = rdm_adjacent_auto(model, 1)
        else:
            engine, _ = rdm_pair_auto(model, r)
        oracle = closed_form_rdm(family, g, r)
        assert np.max(np.abs(engine - oracle)) <= 1e-8, f"g = {g}"


def test_three_body_negative_g_diagonal():
    fam = three_body_family()
    for g in (-1.7, -0.9, -0.25):
        for r in (1, 2, 5):
            rho, _ = rdm_pair_auto(fam.matrix_fn(g), r)
            off = rho - np.diag(np.diag(rho))
            assert np.max(np.abs(off)) < 1e-10


def test_closed_form_states_are_physical():
    # the g > 0 three-body pattern mixes x23 and o terms; positivity is
    # checked rather than assumed
    for fam, rs in ((three_body_family(), (1, 2, 4)), (xyz_family(), (1,))):
        for g in np.linspace(-1.95, 1.95, 27):
            for r in rs:
                w = np.linalg.eigvalsh(closed_form_rdm(fam, g, r))
                assert w[0] > -1e-10, (fam.name, g, r)


def test_hamiltonian_coefficients_xyz():
    coeff = hamiltonian_coefficients(xyz_family(), 1.0, 0.0)
    assert coeff == {"Jx": 1.0, "Jy": 1.0, "Jz": -1.0, "B": 0.0}


def test_hamiltonian_coefficients_three_body():
    assert hamiltonian_coefficients(three_body_family(), 1.0) == \
        {"J3": 0.0, "Jz": 0.0, "B": 4.0}
    assert hamiltonian_coefficients(three_body_family(), -1.0) == \
        {"J3": 4.0, "Jz": 0.0, "B": 0.0}


def test_hamiltonian_coefficients_ladder_unavailable():
    with pytest.raises(ValueError):
        hamiltonian_coefficients(ladder_family(1.0), 0.5)
