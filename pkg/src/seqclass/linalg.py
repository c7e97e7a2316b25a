"""Dense complex-matrix kernel for the small operators used throughout.

Matrices are plain ``numpy.ndarray`` objects of complex dtype; nothing here
goes beyond dimension 8.
"""
from __future__ import annotations

from functools import reduce

import numpy as np

# Structural checks (Hermiticity, PSD, completeness) use max-norm.
STRUCT_TOL = 1e-12
SPECTRAL_TOL = 1e-10
# eigenvalues this close to zero (relative) are treated as exact zeros
ZERO_SNAP = 64 * np.finfo(float).eps


class LinalgError(ValueError):
    pass


class DimensionError(LinalgError):
    pass


class NotHermitian(LinalgError):
    pass


class NotPositiveSemidefinite(LinalgError):
    def __init__(self, eigenvalue: float, tol: float):
        self.eigenvalue = eigenvalue
        self.tol = tol
        super().__init__(f"eigenvalue {eigenvalue:.3e} below -{tol:.1e}")


class EigenDecompositionError(LinalgError):
    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"eigendecomposition residual {residual:.3e} too large")


def as_matrix(m) -> np.ndarray:
    """Coerce to a finite 2-D complex array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise LinalgError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def max_norm(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if np.size(m) else 0.0


def is_hermitian(m, tol: float = STRUCT_TOL) -> bool:
    a = as_matrix(m)
    return a.shape[0] == a.shape[1] and max_norm(a - dagger(a)) <= tol


def as_hermitian(m, tol: float = STRUCT_TOL) -> np.ndarray:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"Hermitian operator must be square, got {a.shape}")
    err = max_norm(a - dagger(a))
    if err > tol:
        raise NotHermitian(f"||A - A^dagger||_max = {err:.3e} exceeds {tol:.1e}")
    return a


def tensor(*ops) -> np.ndarray:
    """Kronecker product; index of (i_a, i_b) is ``i_a * rows_b + i_b``."""
    if not ops:
        raise DimensionError("tensor() needs at least one operand")
    return reduce(np.kron, (np.asarray(op, dtype=complex) for op in ops))


def trace(m) -> complex:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"trace of non-square matrix {a.shape}")
    return complex(np.trace(a))


def hermitian_eigendecomposition(h, tol: float = SPECTRAL_TOL):
    """Eigenvalues in ascending order and the unitary of eigenvectors.

    Raises EigenDecompositionError when the reconstruction residual
    ``||h V - V diag(w)||_max`` exceeds ``tol``.
    """
    a = as_hermitian(h)
    # symmetrise so LAPACK sees an exactly Hermitian input
    a = 0.5 * (a + dagger(a))
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise EigenDecompositionError(float("inf")) from exc
    residual = max_norm(a @ v - v * w)
    if residual > tol * max(1.0, max_norm(a)):
        raise EigenDecompositionError(residual)
    return w, v


def psd_sqrt(h, tol: float = STRUCT_TOL) -> np.ndarray:
    """Principal square root of a positive semidefinite operator.

    Eigenvalues in ``[-tol, 0)`` are clamped to zero, so rank-deficient
    elements such as projectors pass. Eigenvalues at round-off level
    (``|w| <= ZERO_SNAP * max(1, ||h||)``) are also set to zero: the square
    root would otherwise amplify a 1e-18 residue into a 1e-9 entry.
    """
    w, v = hermitian_eigendecomposition(h)
    if w.size and w[0] < -tol:
        raise NotPositiveSemidefinite(float(w[0]), tol)
    snap = ZERO_SNAP * max(1.0, float(np.max(np.abs(w))) if w.size else 0.0)
    w = np.where(w <= snap, 0.0, w)
    root = np.sqrt(w)
    return (v * root) @ dagger(v)


def min_eigenvalue(h) -> float:
    return float(hermitian_eigendecomposition(h)[0][0])


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex).reshape(-1)
    return np.outer(v, np.conj(v))


def commutator(a, b) -> np.ndarray:
    return a @ b - b @ a
