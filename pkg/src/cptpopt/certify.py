"""Optimality certification: feasibility of both sides plus complementary slackness.

A primal candidate X and a dual certificate (a0, A) prove each other optimal
when X is PSD and trace preserving, the induced Z = a0 1 + A (x) 1 - R is
PSD, the slackness product Z X vanishes, and the objective values agree.
The certifier evaluates all of these and reports margins rather than
throwing; the slackness condition can also be solved in reverse, giving the
certificate as the least-squares solution of (a0 1 + A (x) 1 - R) X = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dual import DualCertificate, certificate_matrix
from .linalg import (
    DimensionError,
    as_hermitian,
    hermitian_basis,
    kron,
    min_eigenvalue,
    partial_trace_out,
)
from .model import fidelity

__all__ = [
    "CERTIFIED_OPTIMAL",
    "FEASIBLE_NOT_CERTIFIED",
    "INFEASIBLE",
    "CertTolerances",
    "CertReport",
    "SlacknessSolution",
    "certify",
    "certificate_from_slackness",
]

CERTIFIED_OPTIMAL = "certified-optimal"
FEASIBLE_NOT_CERTIFIED = "feasible-not-certified"
INFEASIBLE = "infeasible"


@dataclass
class CertTolerances:
    """Certification thresholds; cs and gap scale with the operand norms.

    Analytic inputs certify near machine precision, solver outputs at solver
    tolerance.  Effective bounds: PSD margins >= -psd, trace-preservation
    violation <= tp, slackness residual <= cs_rel * (1 + ||Z|| ||X||), and
    gap <= gap_rel * (1 + |Tr XR|).
    """

    psd: float = 1e-9
    tp: float = 1e-9
    cs_rel: float = 1e-8
    gap_rel: float = 1e-8


@dataclass
class CertReport:
    """All certification margins plus the verdict; gap = d1*a0 - Tr(XR)."""

    primal_psd_margin: float
    tp_violation: float
    dual_psd_margin: float
    cs_residual: float
    cs_residual_sym: float
    primal_fidelity: float
    dual_bound: float
    gap: float
    verdict: str


def certify(X, certificate: DualCertificate, R, d1: int, d2: int,
            tols: CertTolerances | None = None) -> CertReport:
    """Check a primal candidate against a dual certificate.

    Verdict is ``certified-optimal`` when both sides are feasible and the
    slackness residual and gap clear their tolerances,
    ``feasible-not-certified`` when only feasibility holds, ``infeasible``
    otherwise.  Loosening every tolerance never downgrades the verdict.
    """
    tols = tols or CertTolerances()
    X = as_hermitian(X)
    R = as_hermitian(R)
    if X.shape[0] != d1 * d2 or R.shape[0] != d1 * d2:
        raise DimensionError("X and R must both have dim d1*d2")
    Z = as_hermitian(certificate_matrix(certificate, R))

    primal_psd_margin = min_eigenvalue(X)
    tp_violation = float(np.linalg.norm(partial_trace_out(X, d1, d2) - np.eye(d1)))
    dual_psd_margin = min_eigenvalue(Z)
    ZX = Z @ X
    cs_residual = float(np.linalg.norm(ZX))
    cs_residual_sym = float(np.linalg.norm(ZX + ZX.conj().T)) / 2
    primal_fidelity = fidelity(X, R)
    dual_bound = d1 * certificate.a0
    gap = dual_bound - primal_fidelity

    feasible = (
        primal_psd_margin >= -tols.psd
        and tp_violation <= tols.tp
        and dual_psd_margin >= -tols.psd
    )
    if not feasible:
        verdict = INFEASIBLE
    elif (
        cs_residual <= tols.cs_rel * (1.0 + np.linalg.norm(Z) * np.linalg.norm(X))
        and gap <= tols.gap_rel * (1.0 + abs(primal_fidelity))
    ):
        verdict = CERTIFIED_OPTIMAL
    else:
        verdict = FEASIBLE_NOT_CERTIFIED

    return CertReport(
        primal_psd_margin=primal_psd_margin,
        tp_violation=tp_violation,
        dual_psd_margin=dual_psd_margin,
        cs_residual=cs_residual,
        cs_residual_sym=cs_residual_sym,
        primal_fidelity=primal_fidelity,
        dual_bound=dual_bound,
        gap=gap,
        verdict=verdict,
    )


@dataclass
class SlacknessSolution:
    """Least-squares certificate from Z X = 0, with residual and rank flag."""

    certificate: DualCertificate
    residual: float
    degenerate: bool


def certificate_from_slackness(X, R, d1: int, d2: int) -> SlacknessSolution:
    """Solve (a0 1 + A (x) 1 - R) X = 0 for (a0, A) in the least-squares sense.

    The unknowns are a0 and the d1^2 - 1 coefficients of A in the traceless
    basis; the complex equations are stacked as real ones.  Rank-deficient
    systems return the minimum-norm solution with ``degenerate`` set.  The
    induced Z still needs a PSD check (:func:`certify` does it).
    """
    X = as_hermitian(X)
    R = as_hermitian(R)
    if X.shape[0] != d1 * d2 or R.shape[0] != d1 * d2:
        raise DimensionError("X and R must both have dim d1*d2")
    eye_out = np.eye(d2)
    terms = [np.eye(d1 * d2, dtype=complex)]
    traceless = hermitian_basis(d1)[1:]
    terms.extend(kron(b, eye_out) for b in traceless)

    columns = []
    for term in terms:
        prod = term @ X
        columns.append(np.concatenate([prod.real.ravel(), prod.imag.ravel()]))
    design = np.column_stack(columns)
    target_mat = R @ X
    target = np.concatenate([target_mat.real.ravel(), target_mat.imag.ravel()])

    coeffs, _, rank, _ = np.linalg.lstsq(design, target, rcond=None)
    degenerate = rank < d1 * d1
    a0 = float(coeffs[0])
    A = sum(c * b for c, b in zip(coeffs[1:], traceless)) + np.zeros((d1, d1), dtype=complex)
    certificate = DualCertificate(a0, as_hermitian(A))
    Z = certificate_matrix(certificate, R)
    residual = float(np.linalg.norm(Z @ X))
    return SlacknessSolution(certificate, residual, degenerate)
