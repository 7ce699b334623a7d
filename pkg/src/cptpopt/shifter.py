"""Qubit polar-angle shifter case study: closed forms and an analytic/numeric sweep.

The target device shifts the polar Bloch angle of a qubit state by alpha in
[0, pi].  Averaged over pure input states, its fidelity operator is the real
symmetric 4x4 matrix

    R(alpha) = [[r1, 0, 0, r5], [0, r2, 0, 0], [0, 0, r3, 0], [r5, 0, 0, r4]]

with r1..r4 = 1/4 +- c -+ s and r5 = 2c, where c = cos(alpha)/12 and
s = pi sin(alpha)/16.  The optimal channel and the matching dual certificate
are known in closed form and switch expression at the regime boundary
alpha0 = arctan(8 / (3 pi)): below it cos(beta) = 1, above it
cos(beta) = c/(s - c).  This module provides the closed forms and a sweep
harness that cross-checks them against the numerical solver and certifier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .certify import CERTIFIED_OPTIMAL, certify
from .dual import DualCertificate
from .linalg import as_hermitian, max_eigenvalue
from .model import build_sdp, fidelity_from_primal
from .solver import SolverOptions, solve

__all__ = [
    "ALPHA0",
    "shift_coefficients",
    "in_first_regime",
    "shifter_fidelity_operator",
    "cos_beta",
    "primal_ansatz",
    "analytic_fidelity",
    "dual_ansatz",
    "SweepRecord",
    "sweep",
]

ALPHA0 = math.atan(8.0 / (3.0 * math.pi))

_SIGMA_Z = np.diag([1.0 + 0.0j, -1.0 + 0.0j])


def _check_domain(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 <= alpha <= math.pi:
        raise ValueError(f"shift angle {alpha!r} outside [0, pi]")
    return alpha


def shift_coefficients(alpha: float) -> tuple[float, float]:
    """The pair (c, s) = (cos(alpha)/12, pi sin(alpha)/16)."""
    alpha = _check_domain(alpha)
    return math.cos(alpha) / 12.0, math.pi * math.sin(alpha) / 16.0


def in_first_regime(alpha: float) -> bool:
    """True for alpha <= alpha0 (ties go to the first regime; the forms agree there)."""
    return _check_domain(alpha) <= ALPHA0


def shifter_fidelity_operator(alpha: float) -> np.ndarray:
    """Closed-form 4x4 fidelity operator R(alpha); real symmetric with trace 1."""
    c, s = shift_coefficients(alpha)
    r1 = 0.25 + c - s
    r2 = 0.25 - c + s
    r3 = 0.25 - c - s
    r4 = 0.25 + c + s
    r5 = 2.0 * c
    R = np.diag([r1, r2, r3, r4]).astype(complex)
    R[0, 3] = R[3, 0] = r5
    return as_hermitian(R)


def cos_beta(alpha: float) -> float:
    """Mixing parameter of the optimal channel: 1 below alpha0, c/(s-c) above."""
    if in_first_regime(alpha):
        return 1.0
    c, s = shift_coefficients(alpha)
    if s - c <= 1e-12:
        raise ValueError(f"cos(beta) = c/(s-c) undefined at alpha = {alpha!r}: s - c too small")
    return c / (s - c)


def primal_ansatz(alpha: float) -> np.ndarray:
    """Optimal channel operator; PSD and trace preserving for every alpha in [0, pi].

    The nonzero block on span{|00>, |11>} is [[cos^2 b, cos b], [cos b, 1]]
    (rank one, PSD for |cos b| <= 1) and the |01> diagonal entry sin^2 b
    completes trace preservation.
    """
    cb = cos_beta(alpha)
    X = np.zeros((4, 4), dtype=complex)
    X[0, 0] = cb * cb
    X[0, 3] = X[3, 0] = cb
    X[1, 1] = 1.0 - cb * cb
    X[3, 3] = 1.0
    return X


def analytic_fidelity(alpha: float) -> float:
    """Optimal mean fidelity: (1 + cos alpha)/2 below alpha0, else 1/2 + 2s + 2c^2/(s-c).

    The two expressions agree at alpha0 (where s = 2c), so the function is
    continuous on [0, pi].
    """
    c, s = shift_coefficients(alpha)
    if in_first_regime(alpha):
        return (1.0 + math.cos(alpha)) / 2.0
    return 0.5 + 2.0 * s + 2.0 * c * c / (s - c)


def dual_ansatz(alpha: float) -> DualCertificate:
    """Matching dual certificate with diagonal A = delta * sigma_z.

    First regime: a0 = 1/4 + 3c, delta = -s.  Second regime:
    a0 = 1/4 + s + c^2/(s-c), delta = -c s/(s-c).  Both solve the slackness
    equations against :func:`primal_ansatz` exactly, the induced dual matrix
    is PSD on the whole domain, and 2 a0 equals :func:`analytic_fidelity`.
    """
    c, s = shift_coefficients(alpha)
    if in_first_regime(alpha):
        a0 = 0.25 + 3.0 * c
        delta = -s
    else:
        a0 = 0.25 + s + c * c / (s - c)
        delta = -c * s / (s - c)
    return DualCertificate(a0, delta * _SIGMA_Z)


@dataclass
class SweepRecord:
    """One sweep point: closed forms vs the solver, plus the A = 0 bound."""

    alpha: float
    f_analytic: float
    f_numeric: float
    gap: float
    bound_a0: float
    certified: bool
    status: str


def sweep(alphas, opts: SolverOptions | None = None) -> list[SweepRecord]:
    """Evaluate every grid angle; solver failures are recorded, not raised.

    ``f_numeric`` is the fidelity recovered from the solver's primal value,
    ``gap`` its certified duality gap, ``bound_a0`` the trivial bound
    2 * max eig R(alpha), and ``certified`` whether the closed-form primal
    and dual points certify each other.  Records come back ordered by alpha.
    """
    records = []
    for alpha in sorted(float(a) for a in alphas):
        R = shifter_fidelity_operator(alpha)
        f_analytic = analytic_fidelity(alpha)
        bound = 2.0 * max_eigenvalue(R)
        report = certify(primal_ansatz(alpha), dual_ansatz(alpha), R, 2, 2)
        try:
            solution = solve(build_sdp(R, 2, 2), opts)
            f_numeric = fidelity_from_primal(solution.p, 2)
            gap = solution.gap
            status = solution.status
        except Exception as exc:  # record and keep sweeping
            f_numeric = math.nan
            gap = math.nan
            status = f"error: {exc}"
        records.append(
            SweepRecord(
                alpha=alpha,
                f_analytic=f_analytic,
                f_numeric=f_numeric,
                gap=gap,
                bound_a0=bound,
                certified=report.verdict == CERTIFIED_OPTIMAL,
                status=status,
            )
        )
    return records
