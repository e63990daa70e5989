"""Greedy subspace refinement for sparse phase retrieval.

One run alternates three operations around the subspace solver:

* matching  -- add the k largest-magnitude entries of the current
  Wirtinger gradient to the support estimate (the union never exceeds 2k
  indices),
* estimation -- minimize the loss over the enlarged support, warm-started
  from the previous iterate,
* pruning   -- keep the k largest entries of the new estimate and re-zero
  the rest.

The loop stops when the loss falls below the tolerance delta or when
t_max rounds are spent. Rounds that stop improving the best recorded
loss are orbiting a spurious support, so after a few of them the next
round re-enters from the spectral support with a fresh seeded solve and
the remaining budget explores a different basin. The reported estimate
is the recorded iterate with the smallest loss.

The partitioned variant splits the samples into four contiguous blocks
used for initialization, first estimation, matching, and final
estimation, in that order, with exactly one matching round. It exists for
verification; using all samples for every operation recovers better.
"""

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import (
    NumericFailure,
    RecoveryReport,
    SupportSet,
    as_complex_signal,
    as_observations,
    nmse,
    phase_dist,
    restrict,
    seed_list,
    top_k_indices,
)
from .objective import grad1, loss
from .sampling import GaussianOperator
from .solver import SolverConfig, default_z0, solve_on_support
from .spectral import init_support

WARM_START_FLOOR = 1e-12
STAGNATION_ROUNDS = 3


@dataclass
class SprConfig:
    """Inputs of a recovery run.

    ``delta`` is the loss level treated as an exact fit; None derives
    1e-14 * mean(y^2)^2 at run time. ``success_threshold`` is the NMSE
    level below which a run counts as exact recovery.
    """

    k: int
    delta: Optional[float] = None
    t_max: int = 50
    solver: SolverConfig = field(default_factory=SolverConfig)
    success_threshold: float = 1e-6

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.t_max < 1:
            raise ValueError("t_max must be >= 1")
        if self.delta is not None and self.delta < 0:
            raise ValueError("delta must be >= 0")


def matching_indices(op, y, z, k: int) -> SupportSet:
    """Indices of the k largest-magnitude entries of the gradient at z."""
    return top_k_indices(grad1(op, y, z), k)


def _finalize(report: RecoveryReport, x_truth, threshold: float) -> RecoveryReport:
    if x_truth is not None:
        report.dist = phase_dist(report.estimate, x_truth)
        report.nmse = nmse(report.estimate, x_truth)
        report.success = report.nmse < threshold
    return report


def run_spr(op, y, config: SprConfig, x_truth=None, seed=0) -> RecoveryReport:
    """Recover a k-sparse signal from magnitude-only samples.

    When ``x_truth`` is given the report carries the phase-invariant
    distance, NMSE, and the success flag; otherwise those fields are None.
    A numeric failure inside the solver is caught and reported as an
    unsuccessful run carrying the last finite iterate.
    """
    t_start = time.perf_counter()
    y = as_observations(y)
    if x_truth is not None:
        x_truth = as_complex_signal(x_truth)
    if not 1 <= config.k <= op.n:
        raise ValueError(f"need 1 <= k <= n, got k={config.k}, n={op.n}")
    lam = float(np.mean(np.square(y)))
    delta = config.delta if config.delta is not None else 1e-14 * lam**2
    warm_floor = WARM_START_FLOOR * np.sqrt(lam)
    k = config.k

    initial = init_support(op, y, k)
    support = initial
    history = [support]
    losses = []
    try:
        outcome = solve_on_support(
            op, y, support, z0=default_z0(op, y, support, seed_list(seed) + [1, 0]),
            config=config.solver, seed=seed_list(seed) + [1, 0],
        )
        x_t = outcome.minimizer
        losses.append(loss(op, y, x_t))
        best_loss, best_x = losses[0], x_t
        stalled_rounds = 0
        t = 0
        while t < config.t_max and losses[-1] >= delta:
            t += 1
            if stalled_rounds >= STAGNATION_ROUNDS:
                # the refinement stopped improving: it is orbiting a spurious
                # support. Re-enter from the spectral support with a fresh
                # seeded solve so the remaining budget explores another basin.
                support = initial
                outcome = solve_on_support(
                    op, y, support, z0=default_z0(op, y, support, seed_list(seed) + [1, t]),
                    config=config.solver, seed=seed_list(seed) + [1, t],
                )
                x_t = outcome.minimizer
                losses.append(loss(op, y, x_t))
                history.append(support)
                stalled_rounds = 0
            else:
                matched = support.union(matching_indices(op, y, x_t, k))
                warm = restrict(x_t, matched)
                warm_used = float(np.linalg.norm(warm)) >= warm_floor
                outcome = solve_on_support(
                    op, y, matched, z0=warm if warm_used else None,
                    config=config.solver, seed=seed_list(seed) + [1, t],
                )
                support = top_k_indices(outcome.minimizer, k)
                x_t = restrict(outcome.minimizer, support)
                losses.append(loss(op, y, x_t))
                history.extend([matched, support])
            if losses[-1] < best_loss * (1.0 - 1e-6):
                stalled_rounds = 0
            else:
                stalled_rounds += 1
            if losses[-1] < best_loss:
                best_loss, best_x = losses[-1], x_t
    except NumericFailure as failure:
        estimate = failure.last_iterate
        if estimate is None:
            estimate = np.zeros(op.n, dtype=np.complex128)
        report = RecoveryReport(
            estimate=estimate,
            nmse=None,
            dist=None,
            loss_trace=losses,
            iterations=(len(history) - 1) // 2,
            success=False,
            support_history=history,
            runtime_s=time.perf_counter() - t_start,
            diagnostics=str(failure),
        )
        if x_truth is not None:
            report.dist = phase_dist(estimate, x_truth)
            report.nmse = nmse(estimate, x_truth)
        return report

    report = RecoveryReport(
        estimate=best_x,
        nmse=None,
        dist=None,
        loss_trace=losses,
        iterations=t,
        success=None,
        support_history=history,
        runtime_s=time.perf_counter() - t_start,
    )
    return _finalize(report, x_truth, config.success_threshold)



def run_spr_partitioned(op: GaussianOperator, y, config: SprConfig, fractions=(0.25, 0.25, 0.25, 0.25), x_truth=None, seed=0) -> RecoveryReport:
    """Single-pass recovery with the samples split into four blocks.

    Block 1 initializes the support, block 2 estimates on it, block 3
    drives the single matching round, and block 4 produces the final
    estimate. The loss trace reports each estimation against its own
    block.
    """
    t_start = time.perf_counter()
    if not isinstance(op, GaussianOperator):
        raise TypeError("partitioned recovery needs explicit rows (GaussianOperator)")
    y = as_observations(y)
    if x_truth is not None:
        x_truth = as_complex_signal(x_truth)
    fractions = [float(f) for f in fractions]
    if len(fractions) != 4 or any(f <= 0 for f in fractions):
        raise ValueError("fractions must be four positive reals")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError("fractions must sum to 1")
    if op.m < 4:
        raise ValueError("need at least 4 samples to partition")
    edges = np.round(np.cumsum(fractions) * op.m).astype(int)
    edges[-1] = op.m
    bounds = [0, *edges.tolist()]
    if any(bounds[i + 1] <= bounds[i] for i in range(4)):
        raise ValueError("a partition block is empty")
    blocks = [
        (GaussianOperator(op.rows[bounds[i]:bounds[i + 1]]), y[bounds[i]:bounds[i + 1]])
        for i in range(4)
    ]
    (a1, y1), (a2, y2), (a3, y3), (a4, y4) = blocks
    k = config.k
    lam = float(np.mean(np.square(y)))
    warm_floor = WARM_START_FLOOR * np.sqrt(lam)

    support = init_support(a1, y1, k)
    x0 = solve_on_support(
        a2, y2, support, z0=default_z0(a2, y2, support, seed_list(seed) + [2, 0]),
        config=config.solver, seed=seed_list(seed) + [2, 0],
    ).minimizer
    matched = support.union(matching_indices(a3, y3, x0, k))
    warm = restrict(x0, matched)
    x1 = solve_on_support(
        a4, y4, matched, z0=warm if float(np.linalg.norm(warm)) >= warm_floor else None,
        config=config.solver, seed=seed_list(seed) + [2, 1],
    ).minimizer

    report = RecoveryReport(
        estimate=x1,
        nmse=None,
        dist=None,
        loss_trace=[loss(a2, y2, x0), loss(a4, y4, x1)],
        iterations=1,
        success=None,
        support_history=[support, matched],
        runtime_s=time.perf_counter() - t_start,
    )
    return _finalize(report, x_truth, config.success_threshold)
