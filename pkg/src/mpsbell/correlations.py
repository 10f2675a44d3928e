"""Two-qubit correlation measures.

All operations act on 4x4 density matrices in the product basis
|00>, |01>, |10>, |11> and are pure functions.

Bell-CHSH function (BCF). With the CHSH operator
B = A1 x B1 + A1 x B2 + A2 x B1 - A2 x B2, A_i = a_i . sigma,
B_i = b_i . sigma over unit vectors, the maximum of |<B>| admits the
closed form B(rho) = 2 sqrt(u + v) where u, v are the two largest
eigenvalues of L^T L and L_ij = Tr[rho sigma_i x sigma_j] is the 3x3
correlation tensor. B > 2 certifies nonlocality; B <= 2 sqrt(2) always.
``bcf_bruteforce`` maximizes |<B>| directly over measurement directions
and serves as the independent oracle for the closed form.

Concurrence. C = max(0, mu1 - mu2 - mu3 - mu4) with mu_i the decreasing
square roots of the eigenvalues of rho rho~, where the spin-flipped
matrix is rho~ = (sigma_y x sigma_y) conj(rho) (sigma_y x sigma_y).
C = 0 iff the state is separable.

Quantum discord. D = I - J in bits, where I is the quantum mutual
information and J the classical correlation, maximized over rank-1
projective measurements on the second qubit (subsystem B). The
maximization runs a coarse angular grid followed by local refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import (
    HERMITICITY_TOL,
    POSITIVITY_TOL,
    TRACE_TOL,
    as_complex_matrix,
    eig_hermitian,
)

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

TSIRELSON = 2.0 * math.sqrt(2.0)
DISCORDANT_THRESHOLD = 1e-6


class InvalidStateError(ValueError):
    """Input is not a physical two-qubit density matrix."""


def ensure_two_qubit_state(rho) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity of a 4x4 state."""
    rho = as_complex_matrix(rho)
    if rho.shape != (4, 4):
        raise InvalidStateError(f"expected a 4x4 matrix, got {rho.shape}")
    dev = np.max(np.abs(rho - rho.conj().T))
    if dev > HERMITICITY_TOL:
        raise InvalidStateError(f"not Hermitian (max deviation {dev:.3e})")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > max(TRACE_TOL, 4 * np.finfo(float).eps):
        raise InvalidStateError(f"trace is {tr!r}, not 1")
    w = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    if w[0] < -POSITIVITY_TOL:
        raise InvalidStateError(f"not positive (min eigenvalue {w[0]:.3e})")
    return rho


def partial_trace(rho, dims=(2, 2), keep=0) -> np.ndarray:
    """Trace out one factor of a bipartite density matrix."""
    dA, dB = dims
    R = np.asarray(rho, dtype=complex).reshape(dA, dB, dA, dB)
    if keep == 0:
        return np.einsum("abcb->ac", R)
    return np.einsum("abad->bd", R)


def correlation_tensor(rho) -> np.ndarray:
    """L_ij = Tr[rho . sigma_i x sigma_j], returned as a real 3x3 matrix."""
    rho = ensure_two_qubit_state(rho)
    L = np.empty((3, 3), dtype=complex)
    for i, si in enumerate(PAULIS):
        for j, sj in enumerate(PAULIS):
            L[i, j] = np.trace(rho @ np.kron(si, sj))
    resid = np.max(np.abs(L.imag))
    if resid > HERMITICITY_TOL:
        raise InvalidStateError(f"correlation tensor has imaginary residue {resid:.3e}")
    return L.real.copy()


def bcf(rho) -> float:
    """Bell-CHSH function via the closed form 2 sqrt(u + v)."""
    L = correlation_tensor(rho)
    u = np.linalg.eigvalsh(L.T @ L)
    return float(2.0 * math.sqrt(max(u[-1] + u[-2], 0.0)))


def chsh_expectation(rho, a1, a2, b1, b2) -> float:
    """<B> for explicit measurement directions (unit 3-vectors)."""
    rho = ensure_two_qubit_state(rho)

    def op(n):
        return n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z

    B = np.kron(op(a1), op(b1) + op(b2)) + np.kron(op(a2), op(b1) - op(b2))
    return float(np.trace(rho @ B).real)


def _unit_vector(theta, phi):
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def _chsh_over_b(L, angles):
    """max over a1, a2 of |<B>| at fixed b-directions.

    With the correlation tensor L, <B> = a1.L(b1+b2) + a2.L(b1-b2); the
    optimum over unit a's is ||L(b1+b2)|| + ||L(b1-b2)||.
    """
    t1, p1, t2, p2 = angles
    s1, s2 = math.sin(t1), math.sin(t2)
    b1 = (s1 * math.cos(p1), s1 * math.sin(p1), math.cos(t1))
    b2 = (s2 * math.cos(p2), s2 * math.sin(p2), math.cos(t2))
    total = 0.0
    for sign in (1.0, -1.0):
        cx = b1[0] + sign * b2[0]
        cy = b1[1] + sign * b2[1]
        cz = b1[2] + sign * b2[2]
        vx = L[0][0] * cx + L[0][1] * cy + L[0][2] * cz
        vy = L[1][0] * cx + L[1][1] * cy + L[1][2] * cz
        vz = L[2][0] * cx + L[2][1] * cy + L[2][2] * cz
        total += math.sqrt(vx * vx + vy * vy + vz * vz)
    return total


def _golden_max(f, lo, hi, tol):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (a + b) / 2.0


def bcf_bruteforce(rho, n_grid: int = 24, refine_tol: float = 1e-6) -> float:
    """Bell-CHSH function by direct maximization over directions.

    Coarse grid of ``n_grid`` points per angle on the measurement
    directions of qubit B (the optimum over qubit A's directions is
    analytic), then coordinate-descent refinement of the four remaining
    angles down to ``refine_tol``. Returns a lower bound on the BCF that
    converges to it as the grid refines.
    """
    L = correlation_tensor(rho)
    thetas = np.linspace(0.0, np.pi, n_grid)
    phis = np.linspace(0.0, 2.0 * np.pi, n_grid, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    vecs = _unit_vector(tt.ravel(), pp.ravel())      # (m, 3)
    Lb = vecs @ L.T                                  # rows are L @ b
    # ||Lb_i +- Lb_j|| from the Gram matrix, avoiding (m, m, 3) temporaries
    gram = Lb @ Lb.T
    sq = np.diag(gram)
    ss = sq[:, None] + sq[None, :]
    f = np.sqrt(np.clip(ss + 2.0 * gram, 0.0, None)) \
        + np.sqrt(np.clip(ss - 2.0 * gram, 0.0, None))
    i, j = np.unravel_index(np.argmax(f), f.shape)
    best = float(f[i, j])
    start = [tt.ravel()[i], pp.ravel()[i], tt.ravel()[j], pp.ravel()[j]]
    Ll = L.tolist()

    def refine(angles):
        step = np.pi / n_grid
        while step > refine_tol:
            for c in range(4):
                def f1(x, c=c):
                    trial = list(angles)
                    trial[c] = x
                    return _chsh_over_b(Ll, trial)

                angles[c] = _golden_max(f1, angles[c] - step, angles[c] + step,
                                        max(step / 16.0, refine_tol / 4.0))
            step /= 2.0
        return _chsh_over_b(Ll, angles)

    return max(best, refine(start))


def spin_flip(rho) -> np.ndarray:
    """rho~ = (sigma_y x sigma_y) conj(rho) (sigma_y x sigma_y)."""
    rho = ensure_two_qubit_state(rho)
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    return yy @ rho.conj() @ yy


def concurrence(rho) -> float:
    """Wootters concurrence, C in [0, 1]; zero iff separable."""
    rho = ensure_two_qubit_state(rho)
    w = np.linalg.eigvals(rho @ spin_flip(rho)).real
    if w.min() < -POSITIVITY_TOL:
        raise InvalidStateError(
            f"rho.rho~ has eigenvalue {w.min():.3e} beyond roundoff")
    mu = np.sort(np.sqrt(np.clip(w, 0.0, None)))[::-1]
    return float(max(0.0, mu[0] - mu[1] - mu[2] - mu[3]))


def _xlog2x(p):
    p = np.clip(p, 0.0, None)
    out = np.zeros_like(p)
    mask = p > 0.0
    out[mask] = p[mask] * np.log2(p[mask])
    return out


def von_neumann_entropy(rho) -> float:
    """S = -sum p log2 p over the spectrum, in bits (0 log 0 = 0)."""
    w, _ = eig_hermitian(as_complex_matrix(rho))
    return float(-np.sum(_xlog2x(w)))


def mutual_information(rho) -> float:
    """I = S(rho_A) + S(rho_B) - S(rho_AB) in bits."""
    rho = ensure_two_qubit_state(rho)
    sa = von_neumann_entropy(partial_trace(rho, keep=0))
    sb = von_neumann_entropy(partial_trace(rho, keep=1))
    return sa + sb - von_neumann_entropy(rho)


def _projector_components(nvecs):
    """Flattened projectors P = (I + n.sigma)/2 for directions (m, 3),
    returned as (m, 4) with columns (P[0,0], P[0,1], P[1,0], P[1,1])."""
    nx, ny, nz = nvecs[..., 0], nvecs[..., 1], nvecs[..., 2]
    return 0.5 * np.stack(
        [1.0 + nz, nx - 1j * ny, nx + 1j * ny, 1.0 - nz], axis=-1)


def _conditional_entropy_batch(R2, rho_a, nvecs):
    """Average post-measurement entropy of qubit A for a batch of
    measurement directions on qubit B.

    R2 is rho rearranged to shape (4, 4) with row index (a, a') and
    column index (b', b), so the unnormalized conditional A-state for
    projector P is T_0 = (R2 @ P.flat).reshape(2, 2), and T_1 = rho_A - T_0.
    """
    P = _projector_components(np.atleast_2d(nvecs))
    T0 = P @ R2.T                       # (m, 4) with columns (aa')
    T1 = rho_a.reshape(4)[None, :] - T0
    out = np.zeros(P.shape[0])
    for T in (T0, T1):
        p = (T[:, 0] + T[:, 3]).real
        det = (T[:, 0] * T[:, 3] - T[:, 1] * T[:, 2]).real
        half = p / 2.0
        disc = np.sqrt(np.clip(half * half - det, 0.0, None))
        lam_hi = np.clip(half + disc, 0.0, None)
        lam_lo = np.clip(half - disc, 0.0, None)
        ok = p > 1e-15
        safe = np.where(ok, p, 1.0)
        ent = -(_xlog2x(lam_hi / safe) + _xlog2x(lam_lo / safe))
        out += np.where(ok, p, 0.0) * ent
    return out


def _cond_entropy_single(R2, rho_a_flat, theta, phi):
    """Scalar-path conditional entropy for one measurement direction."""
    st = math.sin(theta)
    nx, ny, nz = st * math.cos(phi), st * math.sin(phi), math.cos(theta)
    P = np.array([1.0 + nz, nx - 1j * ny, nx + 1j * ny, 1.0 - nz]) * 0.5
    T0 = R2 @ P
    total = 0.0
    for t0, t1, t2, t3 in (T0, rho_a_flat - T0):
        p = (t0 + t3).real
        if p <= 1e-15:
            continue
        det = (t0 * t3 - t1 * t2).real
        half = p / 2.0
        disc = math.sqrt(max(half * half - det, 0.0))
        ent = 0.0
        for lam in (half + disc, half - disc):
            q = lam / p
            if q > 0.0:
                ent -= q * math.log2(q)
        total += p * ent
    return total


def classical_correlation(rho, grid=(64, 128), refine_tol: float = 1e-6) -> float:
    """J = max over projective measurements on B of S(rho_A) - S(rho|{B_k}).

    Rank-1 projectors are parameterized by polar/azimuthal angles; a
    coarse ``grid`` scan (default 64 x 128) is followed by local
    coordinate-descent refinement from the best grid cells down to
    ``refine_tol`` in angle.
    """
    rho = ensure_two_qubit_state(rho)
    # row (a, a'), column (b', b)
    R2 = rho.reshape(2, 2, 2, 2).transpose(0, 2, 3, 1).reshape(4, 4)
    rho_a = partial_trace(rho, keep=0)
    rho_a_flat = rho_a.reshape(4)
    s_a = von_neumann_entropy(rho_a)

    n_theta, n_phi = grid
    thetas = np.linspace(0.0, np.pi, n_theta)
    phis = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    nvecs = _unit_vector(tt.ravel(), pp.ravel())
    cond = _conditional_entropy_batch(R2, rho_a, nvecs)

    def refine(theta, phi):
        angles = [theta, phi]
        step = np.pi / max(n_theta, n_phi // 2)
        while step > refine_tol:
            for c in range(2):
                def f1(x, c=c):
                    trial = list(angles)
                    trial[c] = x
                    return -_cond_entropy_single(R2, rho_a_flat, *trial)

                angles[c] = _golden_max(f1, angles[c] - step, angles[c] + step,
                                        max(step / 16.0, refine_tol / 4.0))
            step /= 2.0
        return -_cond_entropy_single(R2, rho_a_flat, *angles)

    order = np.argsort(cond)
    best = -float(cond[order[0]])
    for idx in order[:3]:
        best = max(best, refine(tt.ravel()[idx], pp.ravel()[idx]))
    return max(s_a + best, 0.0)


def discord(rho, grid=(64, 128), refine_tol: float = 1e-6) -> float:
    """Quantum discord D = I - J in bits; zero on classical states."""
    d = mutual_information(rho) - classical_correlation(rho, grid, refine_tol)
    if d < -1e-8:
        raise RuntimeError(
            f"discord optimizer failure: I - J = {d:.3e} below -1e-8")
    return max(d, 0.0)


@dataclass(frozen=True)
class CorrelationReport:
    """All measures of one state plus the derived regime flags."""

    bcf: float
    concurrence: float
    discord: float
    mutual_information: float
    classical_correlation: float
    nonlocal_: bool
    entangled: bool
    discordant: bool


def classify(rho) -> CorrelationReport:
    """Evaluate every measure and flag nonlocal / entangled / discordant."""
    rho = ensure_two_qubit_state(rho)
    b = bcf(rho)
    c = concurrence(rho)
    i = mutual_information(rho)
    j = classical_correlation(rho)
    d = i - j
    if d < -1e-8:
        raise RuntimeError(f"discord optimizer failure: I - J = {d:.3e}")
    d = max(d, 0.0)
    if not (-1e-9 <= b <= TSIRELSON + 1e-9):
        raise RuntimeError(f"BCF {b!r} outside [0, 2 sqrt 2]")
    if not (0.0 <= c <= 1.0 + 1e-9):
        raise RuntimeError(f"concurrence {c!r} outside [0, 1]")
    return CorrelationReport(
        bcf=b, concurrence=c, discord=d,
        mutual_information=i, classical_correlation=j,
        nonlocal_=bool(b > 2.0),
        entangled=bool(c > 0.0),
        discordant=bool(d > DISCORDANT_THRESHOLD),
    )
