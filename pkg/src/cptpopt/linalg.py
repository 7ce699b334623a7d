"""Dense Hermitian linear algebra on small matrices: bases, spectra, bipartite ops."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "DimensionError",
    "NumericalError",
    "EigenDecomposition",
    "as_hermitian",
    "trace_dot",
    "hermitian_basis",
    "kron",
    "partial_trace_out",
    "eigh",
    "min_eigenvalue",
    "max_eigenvalue",
    "is_psd",
    "real_embed",
]

HERMITICITY_TOL = 1e-12


class DimensionError(ValueError):
    """Operand dimensions are missing, inconsistent, or unsupported."""


class NumericalError(RuntimeError):
    """A numerical routine failed to meet its accuracy contract."""


def as_hermitian(matrix, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Check that ``matrix`` is Hermitian within ``tol`` and return (M + M†)/2.

    The asymmetry bound is relative to max(1, ||M||_F).  Symmetrizing once at
    construction lets everything downstream assume exact Hermiticity (in
    particular, an exactly real diagonal).
    """
    M = np.asarray(matrix, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    asym = np.linalg.norm(M - M.conj().T)
    if asym > tol * max(1.0, np.linalg.norm(M)):
        raise ValueError(f"matrix is not Hermitian: asymmetry {asym:.3e} exceeds tolerance {tol:.1e}")
    return (M + M.conj().T) / 2


def trace_dot(A, B) -> float:
    """Re Tr(A @ B) for Hermitian A, B (their Hilbert-Schmidt inner product)."""
    return float(np.vdot(A, B).real)


def hermitian_basis(d: int) -> list[np.ndarray]:
    """Ordered orthogonal basis of the real vector space of d x d Hermitian matrices.

    Element 0 is the identity; elements 1 .. d^2-1 are traceless and pairwise
    orthogonal with Tr(b_j b_k) = 2 delta_jk.  For d = 2 this is exactly
    (identity, sigma_x, sigma_y, sigma_z); larger dimensions follow the
    generalized Gell-Mann construction (symmetric pair matrices, then
    antisymmetric pairs, then graded diagonal matrices).
    """
    if d < 2:
        raise DimensionError(f"basis dimension must be at least 2, got {d}")
    basis = [np.eye(d, dtype=complex)]
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = m[k, j] = 1.0
            basis.append(m)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1.0j
            m[k, j] = 1.0j
            basis.append(m)
    for level in range(1, d):
        diag = np.zeros(d)
        diag[:level] = 1.0
        diag[level] = -float(level)
        basis.append(np.sqrt(2.0 / (level * (level + 1))) * np.diag(diag).astype(complex))
    return basis


def kron(A, B) -> np.ndarray:
    """Kronecker product; composite row index is i*d2 + k (first factor slow)."""
    return np.kron(np.asarray(A), np.asarray(B))


def partial_trace_out(matrix, d1: int, d2: int) -> np.ndarray:
    """Trace out the second (fast) tensor factor: out[i, j] = sum_k M[(i,k), (j,k)]."""
    M = np.asarray(matrix)
    if M.shape != (d1 * d2, d1 * d2):
        raise DimensionError(f"matrix of shape {M.shape} does not factor as ({d1}*{d2}, {d1}*{d2})")
    return np.einsum("ikjk->ij", M.reshape(d1, d2, d1, d2))


@dataclass
class EigenDecomposition:
    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # unitary; column i pairs with eigenvalue i


def eigh(matrix) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    M = np.asarray(matrix, dtype=complex)
    try:
        w, v = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Hermitian eigendecomposition did not converge: {exc}") from exc
    return EigenDecomposition(w, v)


def _eigvalsh(matrix) -> np.ndarray:
    try:
        return np.linalg.eigvalsh(np.asarray(matrix, dtype=complex))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Hermitian eigenvalue computation did not converge: {exc}") from exc


def min_eigenvalue(matrix) -> float:
    return float(_eigvalsh(matrix)[0])


def max_eigenvalue(matrix) -> float:
    return float(_eigvalsh(matrix)[-1])


def is_psd(matrix, tol: float = 1e-9) -> bool:
    """True when the minimal eigenvalue is at least -tol * max(1, ||M||_F)."""
    M = np.asarray(matrix, dtype=complex)
    return min_eigenvalue(M) >= -tol * max(1.0, np.linalg.norm(M))


def real_embed(matrix) -> np.ndarray:
    """Real symmetric embedding [[Re M, -Im M], [Im M, Re M]] of a Hermitian M.

    The embedding is PSD exactly when M is, and every eigenvalue of M appears
    twice in its spectrum, which lets real-symmetric algorithms consume
    complex Hermitian data.
    """
    M = np.asarray(matrix, dtype=complex)
    return np.block([[M.real, -M.imag], [M.imag, M.real]])
