"""Built-in MPS model families and their closed-form two-site states.

Three exactly solvable families, each with a level crossing of the two
leading transfer eigenvalues at g = 0:

* ``ladder``  -- spin-1/2 ladder with SO(2) symmetry, d = 4 (a rung of
  two spins), D = 2. Site matrices in the computational rung basis
  |00>, |01>, |10>, |11>:

      A_00 = [[0, g], [0, 0]],  A_01 = A_10 = a * I,  A_11 = [[0, 0], [1, 0]]

  The rung state depends on (a, g) only through x = g / (2 a^2); the
  family is therefore parameterized by x directly and the matrices are
  built with g = 2 a^2 x. Its rung reduced density matrix is, up to
  normalization, diag(|x|, 1, 1, |x|) with an all-ones central block.

* ``xyz``     -- chain whose parent Hamiltonian is an XYZ exchange model
  in a field, d = D = 2, A_1 = [[1, g], [1, 1]], A_2 = [[1, -g], [-1, 1]].
  Every two-site reduced density matrix is independent of the distance.

* ``three_body`` -- chain whose parent Hamiltonian contains a three-spin
  coupling, d = D = 2, A_1 = [[0, 0], [1, 1]], A_2 = [[1, g], [0, 0]].
  For g < 0 all pair states are diagonal (classical).

``closed_form_rdm`` returns the published element patterns of these
states (trace-normalized) and is the independent oracle against which
the transfer-matrix route is tested.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .mps import MPSModel

RUNG = 0  # pair-distance sentinel: the d = 4 rung is itself the two-qubit state


@dataclass(frozen=True)
class ModelFamily:
    """A parameter-dependent family of MPS site matrices."""

    name: str
    d: int
    D: int
    matrix_fn: Callable[[float], MPSModel]
    parameter_domain: tuple = (-2.0, 2.0)
    closed_form_available: bool = False
    parameter_name: str = "g"
    # Maps the sweep parameter to the raw matrix parameter g when the
    # two differ (ladder: parameter is x, g = 2 a^2 x). None = identity.
    parameter_to_g: Optional[Callable[[float], float]] = None

    def underlying_g(self, t: float) -> float:
        return self.parameter_to_g(t) if self.parameter_to_g else t


def ladder_family(a: float = 1.0) -> ModelFamily:
    """SO(2)-symmetric spin ladder; sweep parameter is x = g/(2a^2)."""
    a = float(a)
    if a == 0.0:
        raise ValueError("ladder scale a must be nonzero")

    def matrix_fn(x: float) -> MPSModel:
        g = 2.0 * a * a * x
        return MPSModel((
            np.array([[0.0, g], [0.0, 0.0]]),    # |00>
            a * np.eye(2),                        # |01>
            a * np.eye(2),                        # |10>
            np.array([[0.0, 0.0], [1.0, 0.0]]),  # |11>
        ))

    return ModelFamily(
        name="ladder", d=4, D=2, matrix_fn=matrix_fn,
        parameter_domain=(-3.0, 3.0), closed_form_available=True,
        parameter_name="x", parameter_to_g=lambda x: 2.0 * a * a * x,
    )


def xyz_family() -> ModelFamily:
    """XYZ-interaction chain MPS; MPS-QPT at g = 0."""

    def matrix_fn(g: float) -> MPSModel:
        return MPSModel((
            np.array([[1.0, g], [1.0, 1.0]]),
            np.array([[1.0, -g], [-1.0, 1.0]]),
        ))

    return ModelFamily(
        name="xyz", d=2, D=2, matrix_fn=matrix_fn,
        parameter_domain=(-2.0, 2.0), closed_form_available=True,
    )


def three_body_family() -> ModelFamily:
    """Three-spin interaction chain MPS; MPS-QPT at g = 0."""

    def matrix_fn(g: float) -> MPSModel:
        return MPSModel((
            np.array([[0.0, 0.0], [1.0, 1.0]]),
            np.array([[1.0, g], [0.0, 0.0]]),
        ))

    return ModelFamily(
        name="three_body", d=2, D=2, matrix_fn=matrix_fn,
        parameter_domain=(-2.0, 2.0), closed_form_available=True,
    )


BUILTIN_FAMILIES = {
    "ladder": ladder_family,
    "xyz": xyz_family,
    "three_body": three_body_family,
}


def _x_state(x11, x22, x23, x14, o, x33=None, x44=None) -> np.ndarray:
    """Assemble the generic two-qubit pattern with a single o value on
    every off-cross position, trace-normalized."""
    x33 = x22 if x33 is None else x33
    x44 = x11 if x44 is None else x44
    rho = np.array([
        [x11, o,   o,   x14],
        [o,   x22, x23, o],
        [o,   x23, x33, o],
        [x14, o,   o,   x44],
    ], dtype=complex)
    return rho / np.trace(rho)


def _ladder_closed_form(x: float) -> np.ndarray:
    return _x_state(abs(x), 1.0, 1.0, 0.0, 0.0)


def _xyz_closed_form(g: float) -> np.ndarray:
    plus = _x_state(g * g + 6 * g + 1, (g - 1) ** 2, (g - 1) ** 2,
                    (g - 1) ** 2, 1 - g * g)
    minus = _x_state((g - 1) ** 2, (g - 1) ** 2, (g - 1) ** 2,
                     g * g + 6 * g + 1, 1 - g * g)
    if g > 0:
        return plus
    if g < 0:
        return minus
    # Both branches coincide at g = 0 (continuity check).
    if not np.allclose(plus, minus, atol=1e-14):
        raise ValueError("branch mismatch at g = 0")
    return plus


def _three_body_closed_form(g: float, r: int) -> np.ndarray:
    if g > 0:
        if r == 1:
            return _x_state((g + 1) / 2, (g * g + g) / 2,
                            2 * g * g / (g + 1), 2 * g / (g + 1), g)
        t = ((1 - g) / (1 + g)) ** r
        c = 16 * g * g / (1 + g) ** 4
        return _x_state(1 + t, 1 - t, c, c, 4 * g / (1 + g) ** 2)
    if g < 0:
        if r == 1:
            return _x_state(1.0, -g, 0.0, 0.0, 0.0)
        t = ((1 + g) / (1 - g)) ** r
        return _x_state(1 + t, 1 - t, 0.0, 0.0, 0.0)
    # g = 0: both branches give the perfectly correlated classical state.
    return _x_state(1.0, 0.0, 0.0, 0.0, 0.0)


def closed_form_rdm(family: ModelFamily, g: float, r: int = 1) -> np.ndarray:
    """Published two-qubit state of a built-in family, trace-normalized.

    ``g`` is the family's sweep parameter (x for the ladder). The ladder
    supports only the rung (r = RUNG); xyz is distance-independent;
    three_body distinguishes r = 1 from r >= 2.
    """
    if family.name == "ladder":
        if r != RUNG:
            raise ValueError("the ladder closed form is the rung state; use r = RUNG")
        return _ladder_closed_form(g)
    if family.name == "xyz":
        if r < 1:
            raise ValueError("xyz closed form needs a pair distance r >= 1")
        return _xyz_closed_form(g)
    if family.name == "three_body":
        if r < 1:
            raise ValueError("three_body closed form needs a pair distance r >= 1")
        return _three_body_closed_form(g, int(r))
    raise ValueError(f"no closed form for family {family.name!r}")


def hamiltonian_coefficients(family: ModelFamily, g: float, j: float = 0.0) -> dict:
    """Coupling constants of the parent Hamiltonian (metadata only).

    xyz: nearest-neighbour XYZ exchange in a transverse field,
         Jx = -J + (1 + g^2)/2, Jy = -J + g, Jz = -J - g, B = 1 - g^2.
    three_body: J3 = (g - 1)^2, Jz = 2 (g^2 - 1), B = (1 + g)^2.
    The ladder's Hamiltonian is not available in closed form here.
    """
    if family.name == "xyz":
        return {
            "Jx": -j + 0.5 * (1 + g * g),
            "Jy": -j + g,
            "Jz": -j - g,
            "B": 1 - g * g,
        }
    if family.name == "three_body":
        return {
            "J3": (g - 1) ** 2,
            "Jz": 2 * (g * g - 1),
            "B": (1 + g) ** 2,
        }
    raise ValueError(f"no Hamiltonian coefficients for family {family.name!r}")
