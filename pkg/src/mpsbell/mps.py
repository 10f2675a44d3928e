"""Transfer-matrix machinery for translation-invariant matrix product states.

A state on N sites with periodic boundary conditions is defined by d
site matrices A_i (each D x D) through amplitudes Tr(A_{i_1} ... A_{i_N}).
The transfer matrix

    E = sum_i conj(A_i) kron A_i                       (D^2 x D^2)

controls everything computed here:

* the reduced density matrix of k adjacent sites,
      rho[(i_1..i_k),(j_1..j_k)] ~ Tr[(conj(A_i1)..conj(A_ik) kron
                                       A_j1..A_jk) . E^(N-k)],
  trace-normalized; in the thermodynamic limit E^(N-k) is replaced by
  the dominant spectral projector |right><left|,
* the two-site reduced density matrix of a pair at distance r, obtained
  by inserting E^(r-1) between the two generalized single-site transfer
  operators E_{i,j} = conj(A_i) kron A_j,
* the correlation length xi = 1/ln(|l1|/|l2|), which diverges exactly
  when the two largest transfer eigenvalues cross -- the fingerprint of
  an MPS quantum phase transition.

When the dominant eigenvalue modulus is degenerate the thermodynamic
limit is ill-defined and :class:`DegenerateTransferSpectrum` is raised;
callers fall back to a large finite N (see ``suggested_n_sites`` and the
``*_auto`` helpers). Composite indices are lexicographic: (i_1,..,i_k)
maps to sum_j i_j * d^(k-j) with 0-based physical indices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import (
    DEGENERACY_TOL,
    HERMITICITY_TOL,
    POSITIVITY_TOL,
    as_complex_matrix,
    eig_general,
    eig_hermitian,
)

INFINITE = math.inf

# Dominant-multiplet counting tolerance. Numerically defective level
# crossings (Jordan blocks) split a double eigenvalue by ~sqrt(eps), so
# this is deliberately much looser than DEGENERACY_TOL.
MULTIPLET_TOL = 1e-7

# Fixed fallback size when the whole spectrum is modulus-degenerate and
# no decaying scale exists to pick N from.
FALLBACK_N_SITES = 4096
MAX_N_SITES = 50_000_000


class DegenerateTransferSpectrum(RuntimeError):
    """Dominant transfer eigenvalue is modulus-degenerate; the
    thermodynamic limit has no rank-1 projector. Callers should retry
    with a large finite number of sites."""


@dataclass(frozen=True)
class MPSModel:
    """Site matrices A_i of a translation-invariant MPS at fixed parameter."""

    matrices: tuple

    def __post_init__(self):
        mats = tuple(as_complex_matrix(m) for m in self.matrices)
        if len(mats) < 2:
            raise ValueError("an MPS model needs at least d = 2 site matrices")
        D = mats[0].shape[0]
        for m in mats:
            if m.shape != (D, D):
                raise ValueError(f"all site matrices must be {D}x{D}, got {m.shape}")
        if all(np.max(np.abs(m)) == 0 for m in mats):
            raise ValueError("all site matrices are zero")
        object.__setattr__(self, "matrices", mats)

    @property
    def d(self) -> int:
        return len(self.matrices)

    @property
    def D(self) -> int:
        return self.matrices[0].shape[0]


@dataclass
class TransferSpectrum:
    """Spectrum of the transfer matrix, sorted by descending modulus."""

    eigenvalues: np.ndarray
    right_vectors: np.ndarray   # columns, matching eigenvalue order
    left_vectors: np.ndarray    # columns; left^T E = lambda left^T
    gap_ratio: float            # |l2| / |l1|

    @property
    def dominant_right(self) -> np.ndarray:
        return self.right_vectors[:, 0]

    @property
    def dominant_left(self) -> np.ndarray:
        return self.left_vectors[:, 0]

    def multiplet_size(self, tol: float = MULTIPLET_TOL) -> int:
        """Number of eigenvalues with modulus within tol (relative) of |l1|."""
        mod = np.abs(self.eigenvalues)
        return int(np.sum(mod >= mod[0] * (1.0 - tol)))


def transfer_matrix(model: MPSModel) -> np.ndarray:
    """E = sum_i conj(A_i) kron A_i."""
    D = model.D
    E = np.zeros((D * D, D * D), dtype=complex)
    for A in model.matrices:
        E += np.kron(A.conj(), A)
    return E


def transfer_spectrum(model: MPSModel) -> TransferSpectrum:
    """Eigen-decomposed transfer matrix with biorthogonal dominant pair."""
    E = transfer_matrix(model)
    w, vr, vl = eig_general(E)
    if abs(w[0]) == 0.0:
        raise ValueError("transfer matrix has zero dominant eigenvalue (degenerate model)")
    gap = float(abs(w[1]) / abs(w[0])) if len(w) > 1 else 0.0
    return TransferSpectrum(eigenvalues=w, right_vectors=vr, left_vectors=vl, gap_ratio=gap)


def correlation_length(spectrum: TransferSpectrum) -> float:
    """xi = 1/ln(|l1|/|l2|); INFINITE at a level crossing, 0 if l2 = 0."""
    mod = np.abs(spectrum.eigenvalues)
    if mod[0] == 0.0:
        raise ValueError("zero dominant eigenvalue")
    if len(mod) < 2 or mod[1] == 0.0:
        return 0.0
    if spectrum.gap_ratio >= 1.0 - DEGENERACY_TOL:
        return INFINITE
    return float(1.0 / math.log(mod[0] / mod[1]))


def suggested_n_sites(spectrum: TransferSpectrum, accuracy: float = 1e-12,
                      margin: int = 8) -> int:
    """Finite chain length at which subleading transfer modes are damped
    below ``accuracy`` relative to the dominant multiplet."""
    mod = np.abs(spectrum.eigenvalues)
    m = spectrum.multiplet_size()
    if m >= len(mod) or mod[m] == 0.0:
        return FALLBACK_N_SITES
    ratio = mod[m] / mod[0]
    n = int(math.ceil(math.log(accuracy) / math.log(ratio))) + margin
    return max(256, min(n, MAX_N_SITES))


def _site_products(model: MPSModel, k: int):
    """All length-k ordered products of site matrices, lexicographic order."""
    prods = []
    for combo in itertools.product(range(model.d), repeat=k):
        M = model.matrices[combo[0]]
        for i in combo[1:]:
            M = M @ model.matrices[i]
        prods.append(M)
    return prods


def _closure(model: MPSModel, powers: int, n_sites) -> np.ndarray:
    """The boundary factor closing the trace: the dominant projector
    |right><left| in the thermodynamic limit, or (E/|l1|)^powers for a
    finite chain. Common scalar factors drop after trace normalization."""
    spec = transfer_spectrum(model)
    if n_sites is INFINITE or n_sites == INFINITE:
        if spec.gap_ratio >= 1.0 - DEGENERACY_TOL:
            raise DegenerateTransferSpectrum(
                f"dominant transfer eigenvalue is degenerate (gap ratio "
                f"{spec.gap_ratio:.17g}); use a finite number of sites")
        return np.outer(spec.dominant_right, spec.dominant_left)
    B = transfer_matrix(model) / abs(spec.eigenvalues[0])
    return np.linalg.matrix_power(B, powers)


def _finalize_state(rho: np.ndarray) -> np.ndarray:
    """Hermitize, clamp eigenvalue roundoff, trace-normalize.

    Violations beyond tolerance are errors, never silently clamped.
    """
    tr = np.trace(rho)
    if abs(tr) == 0.0:
        raise ValueError("reduced density matrix has zero trace")
    rho = rho / tr
    dev = np.max(np.abs(rho - rho.conj().T))
    if dev > HERMITICITY_TOL:
        raise ValueError(f"reduced density matrix not Hermitian (deviation {dev:.3e})")
    rho = (rho + rho.conj().T) / 2
    w, v = eig_hermitian(rho)
    if w[0] < -POSITIVITY_TOL:
        raise ValueError(f"reduced density matrix not positive (min eigenvalue {w[0]:.3e})")
    if w[0] < 0.0:
        w = np.clip(w, 0.0, None)
        rho = (v * w) @ v.conj().T
        rho = rho / np.trace(rho)
    return rho


def rdm_adjacent(model: MPSModel, k: int, n_sites=INFINITE) -> np.ndarray:
    """Reduced density matrix of k adjacent sites (d^k x d^k, trace 1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if n_sites is not INFINITE and n_sites != INFINITE:
        n_sites = int(n_sites)
        if n_sites <= k:
            raise ValueError(f"n_sites = {n_sites} must exceed k = {k}")
    P = _closure(model, (n_sites - k) if n_sites != INFINITE else 0, n_sites)
    D = model.D
    P4 = P.reshape(D, D, D, D)
    prods = _site_products(model, k)
    dim = model.d ** k
    rho = np.empty((dim, dim), dtype=complex)
    for a, Ma in enumerate(prods):
        Mac = Ma.conj()
        for b, Mb in enumerate(prods):
            # Tr[(conj(Ma) kron Mb) . P]
            rho[a, b] = np.einsum("ac,bd,cdab->", Mac, Mb, P4)
    return _finalize_state(rho)


def rdm_pair(model: MPSModel, r: int, n_sites=INFINITE) -> np.ndarray:
    """Reduced density matrix of two sites at distance r (d^2 x d^2).

    r = 1 is the adjacent pair and agrees with ``rdm_adjacent(model, 2)``.
    """
    r = int(r)
    if r < 1:
        raise ValueError("pair distance r must be >= 1")
    if n_sites is not INFINITE and n_sites != INFINITE:
        n_sites = int(n_sites)
        if n_sites <= r + 1:
            raise ValueError(f"n_sites = {n_sites} must exceed r + 1 = {r + 1}")
    spec = transfer_spectrum(model)
    B = transfer_matrix(model) / abs(spec.eigenvalues[0])
    T = np.linalg.matrix_power(B, r - 1)
    Q = _closure(model, (n_sites - r - 1) if n_sites != INFINITE else 0, n_sites)
    d = model.d
    ops = [np.kron(model.matrices[i].conj(), model.matrices[j])
           for i in range(d) for j in range(d)]
    left_blocks = [op @ T for op in ops]       # E_{i1,j1} . B^(r-1)
    right_blocks = [op @ Q for op in ops]      # E_{i2,j2} . closure
    rho = np.empty((d * d, d * d), dtype=complex)
    for i1 in range(d):
        for j1 in range(d):
            L = left_blocks[i1 * d + j1]
            for i2 in range(d):
                for j2 in range(d):
                    R = right_blocks[i2 * d + j2]
                    rho[i1 * d + i2, j1 * d + j2] = np.trace(L @ R)
    return _finalize_state(rho)


def rdm_adjacent_auto(model: MPSModel, k: int, accuracy: float = 1e-12):
    """Thermodynamic-limit rdm with automatic finite-N fallback.

    Returns ``(rho, n_used)`` where ``n_used`` is None when the true
    dominant-projector limit was taken.
    """
    try:
        return rdm_adjacent(model, k, INFINITE), None
    except DegenerateTransferSpectrum:
        n = max(suggested_n_sites(transfer_spectrum(model), accuracy), k + 1)
        return rdm_adjacent(model, k, n), n


def rdm_pair_auto(model: MPSModel, r: int, accuracy: float = 1e-12):
    """Pair rdm in the thermodynamic limit with finite-N fallback."""
    try:
        return rdm_pair(model, r, INFINITE), None
    except DegenerateTransferSpectrum:
        n = max(suggested_n_sites(transfer_spectrum(model), accuracy), r + 2)
        return rdm_pair(model, r, n), n


# ---------------------------------------------------------------------------
# Level-crossing detection
# ---------------------------------------------------------------------------

def _orthonormal_dominant_subspace(spec: TransferSpectrum) -> np.ndarray:
    m = spec.multiplet_size()
    V = spec.right_vectors[:, :m]
    Q, _ = np.linalg.qr(V)
    return Q


def _merge_intervals(intervals):
    if not intervals:
        return []
    intervals = sorted(intervals)
    merged = [list(intervals[0])]
    for lo, hi in intervals[1:]:
        if lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


def level_crossing_scan(family, g_grid, kink_sensitivity: float = 10.0):
    """Grid intervals where the two leading transfer eigenvalues cross.

    A crossing is flagged when any of three signatures appears:

    * the dominant-modulus multiplet grows beyond the family's generic
      size on this grid (the gap ratio to the next level reaches 1),
    * ln|l1(g)| has a first-derivative discontinuity (an exchange of
      dominance between two analytic eigenvalue branches),
    * the dominant eigenspace changes identity between adjacent points.

    Returns a list of (g_lo, g_hi) brackets, merged and sorted. The
    family only needs a ``matrix_fn(g) -> MPSModel`` attribute.
    """
    g = np.asarray(list(g_grid), dtype=float)
    if g.ndim != 1 or len(g) < 2:
        raise ValueError("g_grid must contain at least two sorted values")
    if np.any(np.diff(g) <= 0):
        raise ValueError("g_grid must be strictly increasing")
    specs = [transfer_spectrum(family.matrix_fn(gi)) for gi in g]
    mults = np.array([s.multiplet_size() for s in specs])
    baseline = int(mults.min())
    n = len(g)
    intervals = []

    def point_bracket(i):
        lo = g[i - 1] if i > 0 else g[0]
        hi = g[i + 1] if i < n - 1 else g[-1]
        return (float(lo), float(hi))

    # (1) extra degeneracy of the dominant multiplet
    for i in np.nonzero(mults > baseline)[0]:
        intervals.append(point_bracket(int(i)))

    # (2) kink in ln|l1(g)|
    lam1 = np.array([abs(s.eigenvalues[0]) for s in specs])
    y = np.log(lam1)
    if n >= 5:
        slopes = np.diff(y) / np.diff(g)
        jumps = np.abs(np.diff(slopes))          # jump estimate at interior i+1
        floor = 1e-9 * max(1.0, float(np.max(np.abs(y)))) / float(np.min(np.diff(g)))
        for i in range(len(jumps)):
            w0, w1 = max(0, i - 10), min(len(jumps), i + 11)
            window = np.delete(jumps[w0:w1], i - w0)
            background = float(np.median(window)) if len(window) else 0.0
            if jumps[i] > kink_sensitivity * (background + floor):
                intervals.append(point_bracket(i + 1))

    # (3) dominant-eigenspace identity change between neighbours
    bases = [_orthonormal_dominant_subspace(s) for s in specs]
    for i in range(n - 1):
        Qa, Qb = bases[i], bases[i + 1]
        if Qa.shape[1] != Qb.shape[1]:
            continue  # multiplet change already flagged by (1)
        overlap = np.linalg.svd(Qa.conj().T @ Qb, compute_uv=False)
        if overlap[-1] < 0.5:
            intervals.append((float(g[i]), float(g[i + 1])))

    return _merge_intervals(intervals)
