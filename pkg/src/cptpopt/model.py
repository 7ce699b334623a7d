"""Problem model: target transformations, the fidelity operator, and the SDP data.

A desired transformation is an ensemble of weighted pure input/output pairs.
It determines a fidelity operator R on the input (x) output space such that a
channel with operator X achieves mean fidelity Tr(X R).  Maximizing that
fidelity over trace-preserving PSD X is cast as a linear matrix-inequality
program over the coefficients of X in a product operator basis; the basis
absorbs the trace-preservation constraint, leaving only the coefficients of
the output-traceless basis elements free.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DimensionError,
    as_hermitian,
    hermitian_basis,
    is_psd,
    kron,
    partial_trace_out,
    trace_dot,
)

__all__ = [
    "EnsembleError",
    "NotTracePreservingError",
    "TransformationEnsemble",
    "SDPProblem",
    "ChoiOperator",
    "pure_state",
    "fidelity_operator",
    "build_sdp",
    "assemble_operator",
    "extract_coefficients",
    "fidelity",
    "fidelity_from_primal",
    "apply_channel",
]

STATE_NORM_TOL = 1e-10
WEIGHT_SUM_WARN = 1e-6
TP_TOL = 1e-8


class EnsembleError(ValueError):
    """An ensemble of input/output pairs is malformed."""


class NotTracePreservingError(ValueError):
    """An operator's partial trace over the output space is not the identity."""


def pure_state(amplitudes) -> np.ndarray:
    """Validate a pure-state amplitude vector (unit norm within 1e-10)."""
    v = np.asarray(amplitudes, dtype=complex).ravel()
    norm_sq = float(np.vdot(v, v).real)
    if abs(norm_sq - 1.0) > STATE_NORM_TOL:
        raise ValueError(f"state norm squared {norm_sq!r} differs from 1 beyond {STATE_NORM_TOL}")
    return v


@dataclass
class TransformationEnsemble:
    """Weighted pure input/output pairs defining the desired transformation.

    Weights are normalized to sum to one on construction; ``renormalized`` is
    set when the raw sum was off by more than 1e-6 (the fidelity formulas
    assume Tr R = 1).
    """

    d1: int
    d2: int
    pairs: list[tuple[float, np.ndarray, np.ndarray]]
    renormalized: bool = field(default=False, init=False)

    def __post_init__(self):
        if not self.pairs:
            raise EnsembleError("ensemble has no input/output pairs")
        cleaned = []
        total = 0.0
        for idx, (weight, vin, vout) in enumerate(self.pairs):
            weight = float(weight)
            if weight < 0.0:
                raise EnsembleError(f"pair {idx}: negative weight {weight}")
            vin = pure_state(vin)
            vout = pure_state(vout)
            if vin.size != self.d1:
                raise EnsembleError(f"pair {idx}: input dim {vin.size}, expected {self.d1}")
            if vout.size != self.d2:
                raise EnsembleError(f"pair {idx}: output dim {vout.size}, expected {self.d2}")
            cleaned.append((weight, vin, vout))
            total += weight
        if total <= 0.0:
            raise EnsembleError("ensemble weights sum to zero")
        if abs(total - 1.0) > WEIGHT_SUM_WARN:
            self.renormalized = True
        self.pairs = [(w / total, vin, vout) for w, vin, vout in cleaned]


def fidelity_operator(ensemble: TransformationEnsemble) -> np.ndarray:
    """Fidelity operator R = sum_k w_k (|in_k><in_k|)^T (x) |out_k><out_k|.

    R is PSD with Tr R = 1; the transpose is taken in the computational
    basis, matching :func:`apply_channel`'s convention so that
    Tr(X R) is the ensemble-averaged output overlap of the channel X.
    """
    dim = ensemble.d1 * ensemble.d2
    R = np.zeros((dim, dim), dtype=complex)
    for weight, vin, vout in ensemble.pairs:
        proj_in_t = np.outer(vin, vin.conj()).T
        proj_out = np.outer(vout, vout.conj())
        R += weight * kron(proj_in_t, proj_out)
    return as_hermitian(R)


@dataclass
class SDPProblem:
    """Data of the linear matrix-inequality program: minimize c'x, F0 + sum x_i F_i >= 0.

    The constraint matrices are the product-basis elements sigma_j (x) tau_k
    with k != 0, ordered j-major; ``jk_pairs[i]`` records the (j, k) indices
    of F[i].
    """

    d1: int
    d2: int
    F0: np.ndarray
    F: list[np.ndarray]
    c: np.ndarray
    jk_pairs: list[tuple[int, int]]
    sigma: list[np.ndarray]
    tau: list[np.ndarray]

    @property
    def m(self) -> int:
        return len(self.F)

    def index_of(self, j: int, k: int) -> int:
        return self.jk_pairs.index((j, k))


def _basis_norm(index: int, d: int) -> float:
    # Tr(b^2) for basis element `index` of hermitian_basis(d)
    return float(d) if index == 0 else 2.0


def build_sdp(R, d1: int, d2: int) -> SDPProblem:
    """Assemble the SDP data for the fidelity operator ``R``.

    F0 = identity / d2, F_i runs over sigma_j (x) tau_k with k != 0, and
    c_i = -Tr(F_i R), so the optimal fidelity is -p* + 1/d2 in terms of the
    minimal objective value p*.
    """
    R = as_hermitian(R)
    if R.shape[0] != d1 * d2:
        raise DimensionError(f"operator of dim {R.shape[0]} does not match d1*d2 = {d1 * d2}")
    sigma = hermitian_basis(d1)
    tau = hermitian_basis(d2)
    F0 = np.eye(d1 * d2, dtype=complex) / d2
    F, c, jk_pairs = [], [], []
    for j in range(d1 * d1):
        for k in range(1, d2 * d2):
            Fi = kron(sigma[j], tau[k])
            F.append(Fi)
            jk_pairs.append((j, k))
            c.append(-trace_dot(Fi, R))
    return SDPProblem(d1, d2, F0, F, np.array(c), jk_pairs, sigma, tau)


def assemble_operator(coeffs, problem: SDPProblem) -> np.ndarray:
    """Channel operator X = F0 + sum_i coeffs[i] F_i for a coefficient vector.

    Trace preservation holds by construction for any real coefficients; X is
    not necessarily PSD.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (problem.m,):
        raise ValueError(f"coefficient vector has length {coeffs.size}, expected {problem.m}")
    X = problem.F0.copy()
    for xi, Fi in zip(coeffs, problem.F):
        X = X + xi * Fi
    return as_hermitian(X)


def extract_coefficients(X, problem: SDPProblem) -> np.ndarray:
    """Coefficients of a trace-preserving Hermitian X in the free basis elements.

    Inverse of :func:`assemble_operator`; uses the orthogonality of the
    product basis, so each coefficient is Tr(X F_i) over the squared basis
    norms.  X must be trace preserving within 1e-8 entrywise.
    """
    X = as_hermitian(X)
    if X.shape[0] != problem.d1 * problem.d2:
        raise DimensionError(f"operator of dim {X.shape[0]} does not match d1*d2 = {problem.d1 * problem.d2}")
    tp_err = np.max(np.abs(partial_trace_out(X, problem.d1, problem.d2) - np.eye(problem.d1)))
    if tp_err > TP_TOL:
        raise NotTracePreservingError(f"partial trace deviates from identity by {tp_err:.3e}")
    coeffs = [
        trace_dot(Fi, X) / (_basis_norm(j, problem.d1) * _basis_norm(k, problem.d2))
        for (j, k), Fi in zip(problem.jk_pairs, problem.F)
    ]
    return np.array(coeffs)


def fidelity(X, R) -> float:
    """Mean fidelity Tr(X R) of a channel operator X against a fidelity operator R."""
    X = np.asarray(X, dtype=complex)
    R = np.asarray(R, dtype=complex)
    if X.shape != R.shape:
        raise DimensionError(f"operator shapes {X.shape} and {R.shape} differ")
    return float(np.trace(X @ R).real)


def fidelity_from_primal(p_star: float, d2: int) -> float:
    """Optimal fidelity -p* + 1/d2 recovered from the minimal objective value."""
    return -p_star + 1.0 / d2


@dataclass
class ChoiOperator:
    """Validated channel operator: PSD (tol 1e-9) and trace preserving (tol 1e-9)."""

    matrix: np.ndarray
    d1: int
    d2: int

    def __post_init__(self):
        self.matrix = as_hermitian(self.matrix)
        if self.matrix.shape[0] != self.d1 * self.d2:
            raise DimensionError(
                f"operator of dim {self.matrix.shape[0]} does not match d1*d2 = {self.d1 * self.d2}"
            )
        if not is_psd(self.matrix, 1e-9):
            raise ValueError("channel operator is not positive semidefinite within tolerance")
        tp_err = np.max(np.abs(partial_trace_out(self.matrix, self.d1, self.d2) - np.eye(self.d1)))
        if tp_err > 1e-9:
            raise NotTracePreservingError(f"partial trace deviates from identity by {tp_err:.3e}")


def apply_channel(choi: ChoiOperator, rho) -> np.ndarray:
    """Apply the channel to a state: rho -> Tr_in[(rho^T (x) 1) X].

    The transpose placement matches :func:`fidelity_operator`, so the
    ensemble-averaged output overlaps reproduce Tr(X R).  Trace preserving
    for any valid :class:`ChoiOperator`; PSD preserving since X is PSD.
    """
    rho = as_hermitian(rho)
    if rho.shape[0] != choi.d1:
        raise DimensionError(f"state dim {rho.shape[0]} does not match input dim {choi.d1}")
    X4 = choi.matrix.reshape(choi.d1, choi.d2, choi.d1, choi.d2)
    out = np.einsum("mi,mkil->kl", rho, X4)
    return as_hermitian(out, tol=1e-10)
