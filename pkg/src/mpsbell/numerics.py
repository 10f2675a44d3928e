"""Dense complex linear-algebra kernel for small matrices.

Everything downstream (transfer matrices, reduced density matrices,
correlation measures) runs on dense complex matrices no larger than
D^2 x D^2 with D <= 4, so this module is a thin, contract-enforcing
layer over numpy/scipy:

* matrices are plain ``numpy.ndarray`` of dtype complex128 (the
  "ComplexMatrix" carrier used throughout the package),
* general eigendecompositions return eigenvalues sorted by descending
  modulus (ties broken by descending real part) together with right
  and left eigenvectors normalized biorthogonally, left^T . right = 1,
* Hermitian eigendecompositions check Hermiticity up to a tolerance
  before delegating to ``eigh``.

Tolerances shared across the package are centralized here so tests and
callers agree on them.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

# Shared numerical tolerances.
HERMITICITY_TOL = 1e-10     # max |M - M^dagger| accepted as Hermitian
EIGEN_RESIDUAL_TOL = 1e-9   # ||M v - lambda v|| <= tol * ||M||
DEGENERACY_TOL = 1e-12      # relative tolerance for |l1| == |l2|
TRACE_TOL = 1e-12           # |tr(rho) - 1| accepted
POSITIVITY_TOL = 1e-10      # eigenvalues >= -tol accepted for states


class EigenSolverError(RuntimeError):
    """Eigensolver failed to converge; never silently ignored."""


def as_complex_matrix(m) -> np.ndarray:
    """Coerce to a 2-D complex128 array, rejecting NaN/Inf entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix contains non-finite entries")
    return a


def matmul(a, b) -> np.ndarray:
    """Matrix product with an explicit dimension check."""
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    """Kronecker product, (a kron b)[i*R+k, j*C+l] = a[i,j] b[k,l]."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def _sort_order(w: np.ndarray) -> np.ndarray:
    """Descending modulus; moduli equal within 1e-12 (relative) are tied
    and break by descending real part."""
    mod = np.abs(w)
    order = list(np.argsort(-mod, kind="stable"))
    scale = mod.max() if len(mod) and mod.max() > 0 else 1.0
    tol = 1e-12 * scale
    i = 0
    while i < len(order):
        j = i + 1
        while j < len(order) and mod[order[i]] - mod[order[j]] <= tol:
            j += 1
        order[i:j] = sorted(order[i:j], key=lambda k: -w[k].real)
        i = j
    return np.array(order)


def eig_general(m) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full eigendecomposition of a general square matrix.

    Returns ``(w, vr, vl)``: eigenvalues sorted by descending modulus
    (ties by descending real part), right eigenvectors as columns of
    ``vr`` (``m @ vr[:, i] = w[i] vr[:, i]``) and left eigenvectors as
    columns of ``vl`` (``vl[:, i] @ m = w[i] vl[:, i]``, no conjugation).
    Matching pairs are normalized so ``vl[:, i] @ vr[:, i] = 1``; pairs
    whose raw overlap is numerically zero (defective or degenerate
    directions) are left unit-normalized instead.
    """
    m = as_complex_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix must be square, got {m.shape}")
    try:
        w, vl_sc, vr = scipy.linalg.eig(m, left=True, right=True)
    except Exception as exc:  # pragma: no cover - LAPACK failure is exotic
        raise EigenSolverError(f"eigensolver failed: {exc}") from exc
    # scipy's vl satisfies vl[:,i]^dagger @ m = w[i] vl[:,i]^dagger, so the
    # transpose-convention left eigenvector is its conjugate.
    vl = vl_sc.conj()
    order = _sort_order(w)
    w, vr, vl = w[order], vr[:, order], vl[:, order]
    overlaps = np.einsum("ij,ij->j", vl, vr)
    for i, d in enumerate(overlaps):
        if abs(d) > 1e-12:
            vr[:, i] = vr[:, i] / d
    return w, vr, vl


def eig_hermitian(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns real eigenvalues in ascending order and the unitary matrix
    of eigenvectors. Raises ``ValueError`` if the input deviates from
    Hermiticity by more than ``HERMITICITY_TOL`` entrywise.
    """
    h = as_complex_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise ValueError(f"matrix must be square, got {h.shape}")
    dev = np.max(np.abs(h - h.conj().T))
    if dev > HERMITICITY_TOL:
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    try:
        w, v = np.linalg.eigh((h + h.conj().T) / 2)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise EigenSolverError(f"eigh failed: {exc}") from exc
    return w, v
