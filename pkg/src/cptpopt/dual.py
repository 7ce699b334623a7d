"""Reduced dual certificates: a scalar shift a0 plus a traceless Hermitian A.

Every dual-feasible matrix of the trace-preserving channel problem has the
form Z = a0 1 + A (x) 1 - R, so the dual search space collapses from
(d1 d2)^2 parameters to the d1^2 - 1 parameters of A plus the shift a0.  For
fixed A the tightest feasible shift is the largest eigenvalue of R - A (x) 1,
and d1 * a0 upper-bounds the achievable fidelity for every certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    DimensionError,
    as_hermitian,
    hermitian_basis,
    kron,
    max_eigenvalue,
    partial_trace_out,
    trace_dot,
)
from .model import build_sdp
from .solver import CONVERGED, SolverConvergenceError, SolverOptions, solve

__all__ = [
    "CertificateError",
    "DualCertificate",
    "certificate_matrix",
    "min_dual_shift",
    "fidelity_upper_bound",
    "extract_certificate",
    "optimal_certificate",
    "subgradient_certificate",
]

TRACELESS_TOL = 1e-10


class CertificateError(ValueError):
    """A dual certificate is malformed (non-Hermitian or non-traceless A)."""


@dataclass
class DualCertificate:
    """Shift a0 and traceless Hermitian A; induces Z = a0 1 + A (x) 1 - R."""

    a0: float
    A: np.ndarray

    def __post_init__(self):
        self.a0 = float(self.a0)
        try:
            self.A = as_hermitian(self.A)
        except ValueError as exc:
            raise CertificateError(str(exc)) from exc
        trace = float(np.trace(self.A).real)
        if abs(trace) > TRACELESS_TOL:
            raise CertificateError(f"A must be traceless: trace {trace:.3e}")


def _split_dims(A: np.ndarray, R: np.ndarray) -> tuple[int, int]:
    d1 = A.shape[0]
    if R.shape[0] % d1:
        raise DimensionError(f"operator dim {R.shape[0]} is not a multiple of input dim {d1}")
    return d1, R.shape[0] // d1


def certificate_matrix(certificate: DualCertificate, R) -> np.ndarray:
    """Dual matrix Z = a0 1 + A (x) 1 - R induced by a certificate."""
    R = as_hermitian(R)
    d1, d2 = _split_dims(certificate.A, R)
    return certificate.a0 * np.eye(d1 * d2) + kron(certificate.A, np.eye(d2)) - R


def min_dual_shift(A, R) -> float:
    """Smallest shift a0 making a0 1 + A (x) 1 - R positive semidefinite.

    Equals the largest eigenvalue of R - A (x) 1; with that shift the induced
    dual matrix has minimal eigenvalue zero.  A = 0 gives the largest
    eigenvalue of R itself.
    """
    A = as_hermitian(A)
    trace = float(np.trace(A).real)
    if abs(trace) > TRACELESS_TOL:
        raise CertificateError(f"A must be traceless: trace {trace:.3e}")
    R = as_hermitian(R)
    d1, d2 = _split_dims(A, R)
    return max_eigenvalue(R - kron(A, np.eye(d2)))


def fidelity_upper_bound(A, R, d1: int, d2: int) -> float:
    """Fidelity bound d1 * min_dual_shift(A, R); valid for every traceless Hermitian A."""
    A = as_hermitian(A)
    if A.shape[0] != d1:
        raise DimensionError(f"A has dim {A.shape[0]}, expected {d1}")
    R = as_hermitian(R)
    if R.shape[0] != d1 * d2:
        raise DimensionError(f"operator dim {R.shape[0]} does not match d1*d2 = {d1 * d2}")
    return d1 * min_dual_shift(A, R)


def extract_certificate(Z, R, d1: int, d2: int) -> tuple[DualCertificate, float]:
    """Recover (a0, A) from a full dual matrix; returns the rebuild residual.

    a0 = Tr(Z + R) / (d1 d2) and A is the trace-adjusted partial trace of
    Z + R over the output space.  The residual ||Z - (a0 1 + A (x) 1 - R)||_F
    vanishes exactly when Z satisfies the dual trace constraints.
    """
    Z = as_hermitian(Z)
    R = as_hermitian(R)
    if Z.shape[0] != d1 * d2 or R.shape[0] != d1 * d2:
        raise DimensionError("Z and R must both have dim d1*d2")
    total = Z + R
    a0 = float(np.trace(total).real) / (d1 * d2)
    A = partial_trace_out(total, d1, d2) / d2 - a0 * np.eye(d1)
    A = as_hermitian(A)
    A = A - (np.trace(A).real / d1) * np.eye(d1)
    certificate = DualCertificate(a0, A)
    residual = float(np.linalg.norm(Z - certificate_matrix(certificate, R)))
    return certificate, residual


def optimal_certificate(R, d1: int, d2: int, opts: SolverOptions | None = None) -> DualCertificate:
    """Certificate minimizing a0, obtained by solving the SDP and extracting A.

    The returned shift is re-tightened to min_dual_shift(A, R), so the
    induced dual matrix touches the cone boundary and d1 * a0 matches the
    solver's dual optimum within its gap tolerance.
    """
    R = as_hermitian(R)
    problem = build_sdp(R, d1, d2)
    solution = solve(problem, opts)
    if solution.status != CONVERGED:
        raise SolverConvergenceError(f"solver finished with status {solution.status!r}")
    certificate, _ = extract_certificate(solution.Z, R, d1, d2)
    return DualCertificate(min_dual_shift(certificate.A, R), certificate.A)


def subgradient_certificate(
    R, d1: int, d2: int, iters: int = 4000, step0: float = 0.1
) -> DualCertificate:
    """Certificate from projected subgradient descent on A -> max eig(R - A (x) 1).

    Independent cross-check for :func:`optimal_certificate` that never calls
    the interior-point solver.  The subgradient is minus the partial trace of
    the top-eigenvector projector (averaged over the eigenspace within 1e-9
    of the maximum when degenerate), projected onto traceless matrices.
    Normalized steps decay as step0 / sqrt(t + 1); the best iterate wins.
    The result is a valid fidelity bound regardless of how far the descent
    got.
    """
    R = as_hermitian(R)
    if R.shape[0] != d1 * d2:
        raise DimensionError(f"operator dim {R.shape[0]} does not match d1*d2 = {d1 * d2}")
    basis = hermitian_basis(d1)[1:]
    coeffs = np.zeros(len(basis))
    best_val = np.inf
    best_coeffs = coeffs.copy()
    eye_out = np.eye(d2)
    for t in range(iters):
        A = sum(a * b for a, b in zip(coeffs, basis))
        w, v = np.linalg.eigh(R - kron(A, eye_out))
        if w[-1] < best_val:
            best_val = w[-1]
            best_coeffs = coeffs.copy()
        top = w >= w[-1] - 1e-9
        vecs = v[:, top]
        projector = (vecs @ vecs.conj().T) / vecs.shape[1]
        grad = -partial_trace_out(projector, d1, d2)
        grad = grad - (np.trace(grad).real / d1) * np.eye(d1)
        g = np.array([trace_dot(grad, b) for b in basis])
        norm = np.linalg.norm(g)
        if norm < 1e-15:
            break
        coeffs = coeffs - (step0 / np.sqrt(t + 1.0)) * g / norm
    A_best = as_hermitian(sum(a * b for a, b in zip(best_coeffs, basis)) + np.zeros((d1, d1)))
    return DualCertificate(min_dual_shift(A_best, R), A_best)
