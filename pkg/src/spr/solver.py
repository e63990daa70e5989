"""Subspace estimation: minimize the loss over signals supported on a set.

The solver runs Barzilai-Borwein (BB1) steps on the conjugate Wirtinger
gradient restricted to the support. Iteration happens in the coordinates
of the support set itself, so entries outside it are exactly zero at all
times, never merely small. The BB quotient uses real-part inner products
(the secant rule of the underlying real parametrization); whenever it is
nonpositive or escapes the safeguards, the iteration falls back to a
fixed projected-gradient step.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .core import (
    DimensionMismatch,
    NumericFailure,
    SupportSet,
    as_complex_signal,
    as_observations,
    seed_list,
)

MACHINE_ZERO_FACTOR = 1e-28


@dataclass
class SolverConfig:
    """Knobs for the subspace solver.

    ``initial_step`` and ``bb_safeguard`` default to None, meaning they are
    derived at solve time from the observation energy lam = mean(y^2):
    0.1 / lam for the step and (1e-8 / lam, 1e8 / lam) for the safeguards.
    ``grad_tol`` is measured relative to the lam^(3/2) gradient scale.
    """

    max_iters: int = 500
    grad_tol: float = 1e-9
    initial_step: Optional[float] = None
    bb_safeguard: Optional[Tuple[float, float]] = None
    restarts: int = 1

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.bb_safeguard is not None:
            lo, hi = self.bb_safeguard
            if not 0 < lo <= hi:
                raise ValueError("need 0 < step_min <= step_max")


@dataclass
class SolverOutcome:
    minimizer: np.ndarray
    final_loss: float
    iters_used: int
    converged: bool


def default_z0(op, y, support: SupportSet, seed) -> np.ndarray:
    """Random start supported on the set, scaled to the observation energy.

    The squared norm equals mean(y^2) exactly, an unbiased proxy for
    ||x||^2 under Gaussian sampling. All-zero observations give the zero
    vector.
    """
    y = as_observations(y)
    if len(support) < 1:
        raise ValueError("support must be nonempty")
    lam = float(np.mean(np.square(y)))
    z0 = np.zeros(support.ambient_dim, dtype=np.complex128)
    if lam == 0.0:
        return z0
    rng = np.random.default_rng(seed)
    parts = rng.standard_normal((len(support), 2))
    u = parts[:, 0] + 1j * parts[:, 1]
    z0[support.indices] = u * (np.sqrt(lam) / np.linalg.norm(u))
    return z0


def solve_on_support(op, y, support: SupportSet, z0=None, config: Optional[SolverConfig] = None, seed=0) -> SolverOutcome:
    """Minimize the loss over signals with supp(z) contained in the support.

    Starts from ``z0`` when given (its support must already lie inside the
    set), otherwise from ``default_z0``. If the gradient criterion is not
    met within ``max_iters``, up to ``config.restarts`` fresh random starts
    are tried; the lowest-loss iterate seen is returned either way.
    """
    cfg = config or SolverConfig()
    y = as_observations(y)
    if len(support) < 1:
        raise ValueError("support must be nonempty")
    if support.ambient_dim != op.n:
        raise DimensionMismatch("support ambient dimension does not match operator")
    if y.size != op.m:
        raise DimensionMismatch("observation length does not match operator")

    idx = support.indices
    if z0 is not None:
        z0 = as_complex_signal(z0)
        if z0.size != op.n:
            raise DimensionMismatch("start point has wrong length")
        outside = np.delete(np.arange(op.n), idx)
        if outside.size and np.any(z0[outside] != 0):
            raise ValueError("start point is supported outside the requested set")

    lam = float(np.mean(np.square(y)))
    if lam == 0.0:
        # zero observations: z = 0 attains loss 0 on any support
        zero = np.zeros(op.n, dtype=np.complex128)
        return SolverOutcome(minimizer=zero, final_loss=0.0, iters_used=0, converged=True)

    sub = op.columns(idx)
    step0 = cfg.initial_step if cfg.initial_step is not None else 0.1 / lam
    if cfg.bb_safeguard is not None:
        step_min, step_max = cfg.bb_safeguard
    else:
        step_min, step_max = 1e-8 / lam, 1e8 / lam
    grad_floor = cfg.grad_tol * lam**1.5
    machine_zero = MACHINE_ZERO_FACTOR * lam**2
    y_sq = np.square(y)
    m = op.m

    def value_grad(u):
        v = sub.forward(u)
        w = np.square(np.abs(v)) - y_sq
        return float(w @ w) / (2.0 * m), sub.adjoint(w * v) / m

    def embed(u):
        z = np.zeros(op.n, dtype=np.complex128)
        z[idx] = u
        return z

    best_u = None
    best_loss = np.inf
    total_iters = 0
    solution = None

    for attempt in range(1 + max(cfg.restarts, 0)):
        if attempt == 0 and z0 is not None:
            u = z0[idx].copy()
        else:
            u = default_z0(op, y, support, seed_list(seed) + [0x5B, attempt])[idx]
        f_u, g = value_grad(u)
        start_loss = f_u
        if f_u < best_loss:
            best_loss, best_u = f_u, u.copy()
        eta = step0
        for it in range(cfg.max_iters + 1):
            if not (np.isfinite(f_u) and np.all(np.isfinite(g))):
                raise NumericFailure("solver iterate became non-finite", last_iterate=embed(best_u))
            gnorm = float(np.linalg.norm(g))
            if f_u <= machine_zero or gnorm <= grad_floor * (1.0 + f_u / lam**2):
                # stationary to tolerance; only counts if it improved on the start
                if f_u <= start_loss:
                    solution = (u, f_u)
                break
            if it == cfg.max_iters:
                break
            u_new = u - eta * g
            f_new, g_new = value_grad(u_new)
            total_iters += 1
            if f_new < best_loss and np.all(np.isfinite(g_new)):
                best_loss, best_u = f_new, u_new.copy()
            du = u_new - u
            dg = g_new - g
            denom = float(np.real(np.vdot(du, dg)))
            eta = float(np.real(np.vdot(du, du))) / denom if denom > 0 else step0
            if not step_min <= eta <= step_max:
                eta = step0
            u, f_u, g = u_new, f_new, g_new
        if solution is not None:
            break

    if solution is not None:
        u, f_u = solution
        return SolverOutcome(minimizer=embed(u), final_loss=f_u, iters_used=total_iters, converged=True)
    return SolverOutcome(minimizer=embed(best_u), final_loss=best_loss, iters_used=total_iters, converged=False)

