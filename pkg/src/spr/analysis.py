"""Executable checks of the analytical claims behind the algorithm.

Each experiment here turns one claim into a reproducible numerical
procedure: the stationary-point classes of the expected loss on a
subspace, clustering of subspace minimizers around the expected optimum,
elementwise concentration of the gradient, energy capture of the spectral
initialization, the expected spectral score, and the phase-transition
curve of the full algorithm. Every result is a pure function of the seed
and the stated parameters.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .algorithm import SprConfig, run_spr
from .core import (
    DimensionMismatch,
    SupportSet,
    as_complex_signal,
    phase_dist,
    restrict,
    seed_list,
)
from .objective import expected_grad1, expected_hessian, grad1
from .parallel import pmap
from .sampling import GaussianOperator, gen_gaussian_operator, gen_sparse_signal, observe
from .solver import SolverConfig, default_z0, solve_on_support
from .spectral import init_support


@dataclass
class StationaryClassReport:
    """Residuals and curvatures at the three stationary classes.

    The expected restricted gradient vanishes at the origin, at the scaled
    restriction omega * x_T, and on the orthogonal sphere (the saddle
    set); ``residuals`` holds the gradient norms actually measured there.
    ``curvatures`` holds quadratic forms of the expected Hessian whose
    signs separate maximum, minimum, and saddle.
    """

    omega_modulus: float
    saddle_norm: float
    residuals: dict
    curvatures: dict


def _saddle_point(x, support: SupportSet, x_t, norm_target: float) -> np.ndarray:
    """A point in the support subspace orthogonal to x_T, of given norm."""
    nxt2 = float(np.vdot(x_t, x_t).real)
    for j in support.indices:
        probe = np.zeros_like(x_t)
        probe[j] = 1.0
        probe -= x_t * (np.vdot(x_t, probe) / nxt2)
        nrm = float(np.linalg.norm(probe))
        if nrm > 1e-8:
            return probe * (norm_target / nrm)
    raise ValueError("orthogonal sphere is empty for this support")


def stationary_classes(x, support: SupportSet) -> StationaryClassReport:
    """Evaluate the expected restricted gradient at its three zero classes.

    Requires the support to intersect the true support of x; otherwise the
    scaled-restriction class degenerates and the claim does not apply.
    """
    x = as_complex_signal(x)
    if support.ambient_dim != x.size:
        raise DimensionMismatch("support ambient dimension does not match signal")
    x_t = restrict(x, support)
    nxt2 = float(np.vdot(x_t, x_t).real)
    if nxt2 == 0.0:
        raise ValueError("support does not intersect supp(x)")
    nx2 = float(np.vdot(x, x).real)
    omega = float(np.sqrt((nx2 + nxt2) / (2.0 * nxt2)))
    saddle_norm = float(np.sqrt(nx2 / 2.0))

    z_min = omega * x_t
    z_saddle = _saddle_point(x, support, x_t, saddle_norm)

    def residual(z):
        return float(np.linalg.norm(restrict(expected_grad1(x, z), support)))

    residuals = {
        "zero": residual(np.zeros_like(x)),
        "minimum": residual(z_min),
        "saddle": residual(z_saddle),
    }

    h_saddle = expected_hessian(x, z_saddle)
    h_min = expected_hessian(x, z_min)
    h_zero = expected_hessian(x, np.zeros_like(x))
    curvatures = {
        "saddle_along_xt": h_saddle.quad_form(x_t),
        "saddle_along_z": h_saddle.quad_form(z_saddle),
        "minimum_along_saddle_dir": h_min.quad_form(z_saddle),
        "zero_max_curvature": _max_restricted_curvature(h_zero, support),
    }
    return StationaryClassReport(
        omega_modulus=omega,
        saddle_norm=saddle_norm,
        residuals=residuals,
        curvatures=curvatures,
    )


def _max_restricted_curvature(h, support: SupportSet) -> float:
    n = h.b11.shape[0]
    idx = np.concatenate([support.indices, support.indices + n])
    sub = h.assemble()[np.ix_(idx, idx)]
    return float(np.max(np.linalg.eigvalsh(sub)))


def geometry_experiment(n, m, k, overlap, trials, seed, config: Optional[SolverConfig] = None) -> list:
    """Clustering of subspace minimizers around the expected optimum.

    The signal has k unit entries on {0..k-1}; the solve support holds
    ``overlap`` of them plus disjoint indices up to size 2k. Each trial
    solves from a random start and records the phase-invariant distance to
    omega * x_T, normalized by ||x||.
    """
    if overlap < 1:
        raise ValueError("overlap must be >= 1 (the support must touch supp(x))")
    if overlap > k:
        raise ValueError("overlap cannot exceed k")
    size = 2 * k
    if k + (size - overlap) > n:
        raise ValueError("ambient dimension too small for a disjoint support")
    x = gen_sparse_signal(n, k, "unit", seed=0, support=np.arange(k))
    t_idx = np.concatenate([np.arange(overlap), np.arange(k, k + size - overlap)])
    support = SupportSet(t_idx, n)
    x_t = restrict(x, support)
    nxt2 = float(np.vdot(x_t, x_t).real)
    nx2 = float(np.vdot(x, x).real)
    target = np.sqrt((nx2 + nxt2) / (2.0 * nxt2)) * x_t

    distances = []
    for trial in range(trials):
        op = gen_gaussian_operator(m, n, seed_list(seed) + [trial, 1])
        y = observe(op, x)
        out = solve_on_support(
            op, y, support,
            z0=default_z0(op, y, support, seed_list(seed) + [trial, 2]),
            config=config, seed=seed_list(seed) + [trial, 2],
        )
        distances.append(phase_dist(out.minimizer, target) / np.sqrt(nx2))
    return distances


@dataclass
class ConcentrationResult:
    normalized_deviations: list
    bound: float = 0.3


def concentration_experiment(n, k, m, trials, seed) -> ConcentrationResult:
    """Elementwise gap between the empirical and expected gradients.

    Uses a flat signal (all nonzeros of unit modulus, so |x_min| =
    ||x|| / sqrt(k)) and evaluates at omega * x_T for a support capturing
    90% of the energy. Deviations are normalized by ||x||^2 |x_min|; the
    reference bound is the 0.3 threshold that makes matching succeed.
    """
    t_true = max(1, int(round(0.9 * k)))
    deviations = []
    for trial in range(trials):
        x = gen_sparse_signal(n, k, "flat", seed=seed_list(seed) + [trial, 0])
        supp = np.flatnonzero(x)
        off = np.setdiff1d(np.arange(n), supp)
        t_idx = np.concatenate([supp[:t_true], off[: k - t_true]])
        support = SupportSet(t_idx, n)
        x_t = restrict(x, support)
        nxt2 = float(np.vdot(x_t, x_t).real)
        nx2 = float(np.vdot(x, x).real)
        z = np.sqrt((nx2 + nxt2) / (2.0 * nxt2)) * x_t
        op = gen_gaussian_operator(m, n, seed_list(seed) + [trial, 1])
        y = observe(op, x)
        gap = np.abs(grad1(op, y, z) - expected_grad1(x, z))
        x_min = float(np.min(np.abs(x[supp])))
        deviations.append(float(np.max(gap)) / (nx2 * x_min))
    return ConcentrationResult(normalized_deviations=deviations)


@dataclass
class InitEnergyRow:
    m: int
    trials: int
    captures: int
    frequency: float


def init_energy_experiment(n, k, m_list, trials, seed, flavor="gaussian") -> list:
    """Frequency of the spectral initialization capturing >90% energy.

    For each trial one signal and one tall Gaussian matrix are drawn; the
    sweep over m reuses its leading rows (common random numbers).
    """
    m_list = [int(m) for m in m_list]
    m_max = max(m_list)
    captures = {m: 0 for m in m_list}
    for trial in range(trials):
        x = gen_sparse_signal(n, k, flavor, seed=seed_list(seed) + [trial, 0])
        tall = gen_gaussian_operator(m_max, n, seed_list(seed) + [trial, 1])
        nx2 = float(np.vdot(x, x).real)
        for m in m_list:
            op = GaussianOperator(tall.rows[:m])
            y = observe(op, x)
            s0 = init_support(op, y, k)
            energy = float(np.vdot(restrict(x, s0), restrict(x, s0)).real)
            if energy / nx2 > 0.9:
                captures[m] += 1
    return [
        InitEnergyRow(m=m, trials=trials, captures=captures[m], frequency=captures[m] / trials)
        for m in m_list
    ]


def mc_envelope_scores(x, m, seed, chunk_rows=200_000) -> np.ndarray:
    """Monte-Carlo estimate of the expected spectral scores E[y |a_j|].

    Streams fresh Gaussian rows in chunks so m can be large (10^6) without
    materializing the full matrix. Deterministic for a fixed seed and
    chunk size.
    """
    x = as_complex_signal(x)
    n = x.size
    rng = np.random.default_rng(seed_list(seed))
    total = np.zeros(n)
    done = 0
    while done < m:
        c = min(chunk_rows, m - done)
        parts = rng.standard_normal((c, n, 2))
        rows = (parts[..., 0] + 1j * parts[..., 1]) / np.sqrt(2.0)
        y = np.abs(rows @ np.conj(x))
        total += y @ np.abs(rows)
        done += c
    return total / m


def ambiguity_match_score(estimate2d, truth2d) -> float:
    """Minimum NMSE over the Fourier-magnitude ambiguity group.

    Magnitude-only 2D Fourier sampling cannot distinguish a global phase,
    circular spatial shifts, or the conjugate inversion
    x(r) -> conj(x(-r)). The score is the phase-invariant distance to the
    truth minimized over all shift/inversion candidates, normalized by the
    truth norm. Exhaustive over the h * w * 2 candidates; meant for
    desk-scale verification.
    """
    est = np.asarray(estimate2d, dtype=np.complex128)
    tru = np.asarray(truth2d, dtype=np.complex128)
    if est.shape != tru.shape or est.ndim != 2:
        raise DimensionMismatch("images must share a 2-d shape")
    h, w = tru.shape
    flipped = np.conj(est[(-np.arange(h)) % h][:, (-np.arange(w)) % w])
    best = np.inf
    flat_truth = tru.ravel()
    for base in (est, flipped):
        for dy in range(h):
            rolled_rows = np.roll(base, dy, axis=0)
            for dx in range(w):
                cand = np.roll(rolled_rows, dx, axis=1)
                best = min(best, phase_dist(cand.ravel(), flat_truth))
    return best / float(np.linalg.norm(flat_truth))


@dataclass
class PhaseTransitionRow:
    m: int
    trials: int
    successes: int
    frequency: float
    mean_nmse: float
    mean_runtime_ms: float


def _phase_transition_trial(task):
    n, k, m, seed, trial, config = task
    x = gen_sparse_signal(n, k, "gaussian", seed=[seed, trial, 0])
    op = gen_gaussian_operator(m, n, [seed, trial, 1])
    y = observe(op, x)
    report = run_spr(op, y, config, x_truth=x, seed=[seed, trial, 2])
    return m, bool(report.success), float(report.nmse), report.runtime_s


def phase_transition(n, k, m_values, trials, seed, config: Optional[SprConfig] = None, jobs=None) -> list:
    """Success frequency of full recovery as a function of the sample count.

    Per-trial base seeds are shared across the sweep (common random
    numbers): for a fixed trial index, the signal is identical at every m
    and a taller sampling matrix extends a shorter one row by row.
    """
    m_values = [int(m) for m in m_values]
    config = config or SprConfig(k=k)
    base = seed_list(seed)
    if len(base) != 1:
        raise ValueError("phase transition wants a scalar base seed")
    tasks = [(n, k, m, base[0], trial, config) for m in m_values for trial in range(trials)]
    results = pmap(_phase_transition_trial, tasks, jobs=jobs)
    rows = []
    for i, m in enumerate(m_values):
        block = results[i * trials:(i + 1) * trials]
        succ = sum(1 for _, ok, _, _ in block if ok)
        rows.append(
            PhaseTransitionRow(
                m=m,
                trials=trials,
                successes=succ,
                frequency=succ / trials,
                mean_nmse=float(np.mean([r[2] for r in block])),
                mean_runtime_ms=float(np.mean([r[3] for r in block])) * 1e3,
            )
        )
    return rows
