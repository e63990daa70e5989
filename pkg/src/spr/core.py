"""Shared domain types, phase-invariant metrics, and top-k selection.

Signals, observations, and gradients are plain numpy arrays (complex128 /
float64). The helpers here validate them at API boundaries; everything in
this module is a pure function of its inputs and safe to share across
threads.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np


class DimensionMismatch(ValueError):
    """Operands have incompatible lengths or ambient dimensions."""


class CapacityError(ValueError):
    """A requested cardinality exceeds the ambient dimension."""


class DegenerateSignalError(ValueError):
    """A reference signal required to be nonzero is zero."""


class NumericFailure(RuntimeError):
    """A numeric iteration produced NaN/Inf.

    Carries the last finite iterate (``last_iterate``) for diagnostics.
    """

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


def seed_list(seed) -> list:
    """Normalize a seed (int or sequence of ints) to a list for composing.

    Derived streams append distinguishing integers, e.g.
    ``default_rng(seed_list(seed) + [tag])``, keeping every random draw
    deterministic in the run seed without stream collisions.
    """
    if isinstance(seed, (list, tuple)):
        return [int(s) for s in seed]
    return [int(seed)]


def as_complex_signal(values) -> np.ndarray:
    """Validate and convert to a 1-d complex128 signal vector.

    Requires length >= 1 and finite real/imaginary parts throughout.
    """
    z = np.asarray(values, dtype=np.complex128)
    if z.ndim != 1 or z.size < 1:
        raise ValueError("signal must be a nonempty 1-d vector")
    if not np.all(np.isfinite(z)):
        raise ValueError("signal contains NaN or Inf")
    return z


def as_observations(values) -> np.ndarray:
    """Validate and convert to a 1-d vector of nonnegative magnitudes."""
    y = np.asarray(values, dtype=np.float64)
    if y.ndim != 1 or y.size < 1:
        raise ValueError("observations must be a nonempty 1-d vector")
    if not np.all(np.isfinite(y)):
        raise ValueError("observations contain NaN or Inf")
    if np.any(y < 0):
        raise ValueError("observations must be nonnegative")
    return y


@dataclass(frozen=True, eq=False)
class SupportSet:
    """Ordered set of candidate nonzero indices inside an ambient dimension.

    ``indices`` is stored strictly increasing with no duplicates; every
    index lies in ``[0, ambient_dim)``. Construction normalizes (sorts and
    deduplicates) whatever iterable it is given.
    """

    indices: np.ndarray
    ambient_dim: int

    def __post_init__(self):
        idx = np.unique(np.asarray(self.indices, dtype=np.int64).ravel())
        if self.ambient_dim < 1:
            raise ValueError("ambient_dim must be >= 1")
        if idx.size > 0 and (idx[0] < 0 or idx[-1] >= self.ambient_dim):
            raise ValueError("support indices out of range")
        if idx.size > self.ambient_dim:
            raise CapacityError("support larger than ambient dimension")
        object.__setattr__(self, "indices", idx)

    def __len__(self) -> int:
        return int(self.indices.size)

    def __contains__(self, index) -> bool:
        return bool(np.isin(index, self.indices))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SupportSet):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and np.array_equal(
            self.indices, other.indices
        )

    def union(self, other: "SupportSet") -> "SupportSet":
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("ambient dimensions differ")
        return SupportSet(np.union1d(self.indices, other.indices), self.ambient_dim)

    def to_mask(self) -> np.ndarray:
        mask = np.zeros(self.ambient_dim, dtype=bool)
        mask[self.indices] = True
        return mask


@dataclass
class RecoveryReport:
    """Outcome of a recovery run.

    ``nmse``, ``dist`` and ``success`` are None when no ground truth was
    supplied. ``support_history`` lists the support sets in chronological
    order: the initial set, then the matched (union) and pruned sets of
    each iteration.
    """

    estimate: np.ndarray
    nmse: Optional[float]
    dist: Optional[float]
    loss_trace: list = field(default_factory=list)
    iterations: int = 0
    success: Optional[bool] = None
    support_history: list = field(default_factory=list)
    runtime_s: float = 0.0
    diagnostics: Optional[str] = None


def phase_dist(z, x) -> float:
    """Distance between z and x modulo a global phase factor.

    Minimizes ||z - x * exp(j*phi)|| over phi; the minimum has the closed
    form sqrt(||z||^2 + ||x||^2 - 2|x^* z|), clamped at zero against
    round-off.
    """
    z = as_complex_signal(z)
    x = as_complex_signal(x)
    if z.shape != x.shape:
        raise DimensionMismatch("signals have different lengths")
    sq = (
        np.vdot(z, z).real
        + np.vdot(x, x).real
        - 2.0 * abs(np.vdot(x, z))
    )
    return float(np.sqrt(max(sq, 0.0)))


def nmse(z, x) -> float:
    """Phase-invariant distance normalized by the reference norm ||x||."""
    x = as_complex_signal(x)
    ref = float(np.linalg.norm(x))
    if ref == 0.0:
        raise DegenerateSignalError("reference signal is zero")
    return phase_dist(z, x) / ref


def top_k_indices(v, k: int) -> SupportSet:
    """Indices of the k largest-modulus entries of v.

    Ties are broken toward the smaller index so selection is deterministic.
    """
    v = as_complex_signal(v)
    n = v.size
    if k <= 0:
        raise ValueError("k must be positive")
    if k > n:
        raise CapacityError(f"k={k} exceeds dimension n={n}")
    mags = np.abs(v)
    # stable sort on descending magnitude keeps the smaller index first
    order = np.argsort(-mags, kind="stable")
    return SupportSet(order[:k], n)


def restrict(z, support: SupportSet) -> np.ndarray:
    """Zero out z everywhere outside the support set."""
    z = as_complex_signal(z)
    if support.ambient_dim != z.size:
        raise DimensionMismatch("support ambient dimension does not match signal")
    out = np.zeros_like(z)
    out[support.indices] = z[support.indices]
    return out
