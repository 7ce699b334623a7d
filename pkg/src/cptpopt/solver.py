"""Feasible-start primal-dual interior-point solver for the fidelity SDP family.

The primal problem is

    minimize    c' x
    subject to  F(x) = F0 + sum_i x_i F_i  >=  0

and its dual

    maximize    -Tr(F0 Z)
    subject to  Z >= 0,   Tr(F_i Z) = c_i  for all i.

Both iterates are kept strictly feasible throughout, so after every iteration
the optimum is bracketed: -Tr(F0 Z) <= optimum <= c'x, with duality gap
exactly Tr(F(x) Z).  This relies on F0 > 0 (making x = 0 a strictly feasible
primal start) and on traceless, linearly independent F_i (the strictly
feasible dual start is the minimum-norm solution of the trace constraints
shifted by a multiple of the identity).  The problems produced by
:func:`cptpopt.model.build_sdp` satisfy both.

Hermitian data is converted to real symmetric matrices via the
spectrum-doubling embedding before entering the core iteration; reported
objective values are mapped back to the original Hermitian problem, so ``p``
and ``d`` always refer to the complex-domain definitions.

Search directions use Nesterov-Todd scaling with an adaptive centering
parameter estimated from an affine predictor step.  Primal and dual updates
share one step length limited to a 0.98 fraction of the distance to the cone
boundary, which makes the gap contract by exactly 1 - alpha(1 - sigma) per
accepted step; steps are accepted only if the gap does not increase, so the
reported gap sequence is monotone.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

import numpy as np

from .linalg import as_hermitian, min_eigenvalue, is_psd, real_embed, trace_dot

__all__ = [
    "CONVERGED",
    "ITERATION_LIMIT",
    "NUMERICAL_FAILURE",
    "SolverOptions",
    "SDPSolution",
    "FeasibilityReport",
    "SolverConvergenceError",
    "solve",
    "check_primal_feasible",
    "check_dual_feasible",
]

CONVERGED = "converged"
ITERATION_LIMIT = "iteration-limit"
NUMERICAL_FAILURE = "numerical-failure"

_SCHUR_COND_LIMIT = 1e12
_SCHUR_JITTER = 1e-12
_BOUNDARY_FRACTION = 0.98


class SolverConvergenceError(RuntimeError):
    """The solver did not reach the requested duality gap."""


@dataclass
class SolverOptions:
    gap_tol: float = 1e-8
    feas_tol: float = 1e-9
    max_iter: int = 200
    verbosity: int = 0

    def __post_init__(self):
        if self.gap_tol <= 0.0 or self.feas_tol <= 0.0:
            raise ValueError("gap_tol and feas_tol must be positive")


@dataclass
class SDPSolution:
    """Solver output: primal point, dual matrix, objectives, and certified gap.

    ``p`` = c'x and ``d`` = -Tr(F0 Z) are the feasible objective values, so
    the optimum always lies in [d, p].  ``gap_history`` records the duality
    gap after each iteration (monotone non-increasing up to 1e-12 slack);
    ``schur_perturbed`` flags the ill-conditioning fallback.
    """

    x: np.ndarray
    Z: np.ndarray
    p: float
    d: float
    gap: float
    status: str
    iterations: int = 0
    gap_history: list[float] = field(default_factory=list)
    schur_perturbed: bool = False


@dataclass
class FeasibilityReport:
    """Feasibility diagnostics; ``max_equality_violation`` is None for primal points."""

    min_eigenvalue: float
    max_equality_violation: float | None
    feasible: bool


def solve(problem, opts: SolverOptions | None = None) -> SDPSolution:
    """Solve the primal/dual pair for an :class:`cptpopt.model.SDPProblem`.

    Returns a bracketing solution in every case; ``status`` is ``converged``
    once gap <= gap_tol with both feasibility tolerances met,
    ``iteration-limit`` when the iteration budget ran out or progress
    stalled, and ``numerical-failure`` on linear-algebra breakdown.  Output
    is deterministic for identical inputs and options.
    """
    opts = opts or SolverOptions()
    F0 = as_hermitian(problem.F0)
    Fs = [as_hermitian(Fi) for Fi in problem.F]
    c = np.asarray(problem.c, dtype=float)
    if c.shape != (len(Fs),):
        raise ValueError(f"coefficient vector has length {c.size}, expected {len(Fs)}")

    F0e = real_embed(F0)
    Fstack = np.array([real_embed(Fi) for Fi in Fs])
    x, Ze, status, iterations, history, perturbed = _core(F0e, Fstack, c, opts)

    Z = _unembed_dual(Ze)
    p = float(c @ x)
    d = -trace_dot(F0, Z)

    if status == CONVERGED:
        Fx = F0 + np.tensordot(x, np.array(Fs), axes=1)
        violation = max(abs(trace_dot(Fi, Z) - ci) for Fi, ci in zip(Fs, c))
        if (
            violation > opts.feas_tol
            or min_eigenvalue(Fx) < -opts.feas_tol
            or min_eigenvalue(Z) < -opts.feas_tol
        ):
            status = NUMERICAL_FAILURE

    return SDPSolution(
        x=x,
        Z=Z,
        p=p,
        d=d,
        gap=p - d,
        status=status,
        iterations=iterations,
        gap_history=history,
        schur_perturbed=perturbed,
    )


def check_primal_feasible(x, problem, tol: float = 1e-9) -> FeasibilityReport:
    """Report the minimal eigenvalue of F(x) and whether it clears ``-tol``."""
    x = np.asarray(x, dtype=float)
    Fx = problem.F0 + np.tensordot(x, np.array(problem.F), axes=1)
    return FeasibilityReport(min_eigenvalue(Fx), None, is_psd(Fx, tol))


def check_dual_feasible(Z, problem, tol: float = 1e-9) -> FeasibilityReport:
    """Report min eigenvalue of Z and the worst trace-constraint violation."""
    Z = as_hermitian(Z)
    violation = max(abs(trace_dot(Fi, Z) - ci) for Fi, ci in zip(problem.F, problem.c))
    return FeasibilityReport(min_eigenvalue(Z), violation, is_psd(Z, tol) and violation <= tol)


def _sym(A: np.ndarray) -> np.ndarray:
    return (A + A.T) / 2


def _is_pd(A: np.ndarray) -> bool:
    try:
        np.linalg.cholesky(A)
        return True
    except np.linalg.LinAlgError:
        return False


def _boundary_step(P: np.ndarray, D: np.ndarray) -> float:
    """Largest t with P + t D positive definite, for P > 0."""
    L = np.linalg.cholesky(P)
    half = np.linalg.solve(L, D)
    scaled = np.linalg.solve(L, half.T).T
    lam = float(np.linalg.eigvalsh(_sym(scaled))[0])
    if lam >= -1e-14:
        return np.inf
    return -1.0 / lam


def _unembed_dual(Ze: np.ndarray) -> np.ndarray:
    """Adjoint of the real embedding; maps a real dual point back to a Hermitian one.

    The adjoint absorbs the factor-two trace relation of the embedding, so
    the recovered Z satisfies Tr(F_i Z) = c_i and -Tr(F0 Z) equals the real
    core's dual objective.
    """
    n = Ze.shape[0] // 2
    z11 = Ze[:n, :n]
    z22 = Ze[n:, n:]
    z12 = Ze[:n, n:]
    return as_hermitian((z11 + z22) + 1j * (z12.T - z12))


def _core(F0, Fstack, c, opts):
    """Nesterov-Todd path following on real symmetric data."""
    n = F0.shape[0]
    m = Fstack.shape[0]
    Fflat = Fstack.reshape(m, -1)
    history: list[float] = []
    perturbed = False

    if np.linalg.eigvalsh(F0)[0] <= 0.0:
        raise ValueError("F0 must be positive definite for the feasible-start solver")
    traces = np.trace(Fstack, axis1=1, axis2=2)
    if np.max(np.abs(traces)) > 1e-10:
        raise ValueError("constraint matrices must be traceless for the feasible dual start")

    x = np.zeros(m)
    gram = Fflat @ Fflat.T
    try:
        particular = np.linalg.solve(gram, c)
    except np.linalg.LinAlgError as exc:
        raise ValueError("constraint matrices are linearly dependent") from exc
    K = np.tensordot(particular, Fstack, axes=1)
    beta = 1.0 + max(0.0, -float(np.linalg.eigvalsh(K)[0]))
    Z = beta * np.eye(n) + K

    status = ITERATION_LIMIT
    stall = 0
    it = 0
    while True:
        S = _sym(F0 + np.tensordot(x, Fstack, axes=1))
        gap = float(np.vdot(S, Z))
        history.append(gap)
        if opts.verbosity >= 1:
            print(f"iter {it:3d}  gap {gap:.6e}", file=sys.stderr)
        if gap <= 0.999 * opts.gap_tol:
            status = CONVERGED
            break
        if it >= opts.max_iter:
            break
        it += 1
        mu = gap / n

        # scaling breakdown means the iterates reached the numerical floor;
        # the current pair is still a valid bracketing, so stop without
        # declaring the output unreliable
        try:
            ws, us = np.linalg.eigh(S)
            if ws[0] <= 0.0:
                break
            sq = np.sqrt(ws)
            s_half = (us * sq) @ us.T
            s_inv_half = (us / sq) @ us.T
            s_inv = (us / ws) @ us.T
            wt, ut = np.linalg.eigh(_sym(s_half @ Z @ s_half))
            if wt[0] <= 0.0:
                break
            t_half = (ut * np.sqrt(wt)) @ ut.T
            w_inv = _sym(s_inv_half @ t_half @ s_inv_half)
        except np.linalg.LinAlgError:
            break

        scaled = np.array([_sym(w_inv @ Fi @ w_inv) for Fi in Fstack])
        schur = Fflat @ scaled.reshape(m, -1).T
        schur = (schur + schur.T) / 2
        if np.linalg.cond(schur) > _SCHUR_COND_LIMIT:
            schur = schur + _SCHUR_JITTER * np.eye(m)
            perturbed = True
        s_dots = Fflat @ s_inv.ravel()

        try:
            dx_aff = np.linalg.solve(schur, -c)
        except np.linalg.LinAlgError:
            schur = schur + _SCHUR_JITTER * np.eye(m)
            perturbed = True
            try:
                dx_aff = np.linalg.solve(schur, -c)
            except np.linalg.LinAlgError:
                status = NUMERICAL_FAILURE
                break

        dS_aff = np.tensordot(dx_aff, Fstack, axes=1)
        dZ_aff = _sym(-Z - w_inv @ dS_aff @ w_inv)
        alpha_aff = min(1.0, _boundary_step(S, dS_aff), _boundary_step(Z, dZ_aff))
        gap_aff = max(0.0, float(np.vdot(S + alpha_aff * dS_aff, Z + alpha_aff * dZ_aff)))
        sigma = min(0.9, max(1e-6, (gap_aff / gap) ** 3))

        accepted = False
        x_new, Z_new, gap_new = x, Z, gap
        for sigma_try in (sigma, 0.9, 0.99):
            rhs = sigma_try * mu * s_dots - c
            dx = np.linalg.solve(schur, rhs)
            dS = np.tensordot(dx, Fstack, axes=1)
            dZ = _sym(sigma_try * mu * s_inv - Z - w_inv @ dS @ w_inv)
            alpha = min(
                1.0,
                _BOUNDARY_FRACTION * _boundary_step(S, dS),
                _BOUNDARY_FRACTION * _boundary_step(Z, dZ),
            )
            for _ in range(40):
                x_try = x + alpha * dx
                S_try = _sym(F0 + np.tensordot(x_try, Fstack, axes=1))
                Z_try = _sym(Z + alpha * dZ)
                gap_try = float(np.vdot(S_try, Z_try))
                if gap_try <= gap + 1e-13 and _is_pd(S_try) and _is_pd(Z_try):
                    x_new, Z_new, gap_new = x_try, Z_try, gap_try
                    accepted = True
                    break
                alpha *= 0.5
            if accepted:
                break
        if not accepted:
            break
        x, Z = x_new, Z_new
        if gap - gap_new <= 1e-15 * max(1.0, gap):
            stall += 1
            if stall >= 5:
                break
        else:
            stall = 0

    return x, Z, status, it, history, perturbed
