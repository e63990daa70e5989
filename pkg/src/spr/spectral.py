"""Spectral support initialization and its closed-form score expectation.

The initializer scores each coordinate j by the magnitude correlation
Z_j = (1/m) * sum_i y_i |a_ij| and keeps the k best. Under Gaussian
sampling the score expectation is (pi/4) * ||x|| * F(-1/2, -1/2; 1; t)
with t = |x_j|^2 / ||x||^2, where F is the Gauss hypergeometric series;
off-support coordinates sit exactly at (pi/4) * ||x|| and on-support ones
strictly above, which is what makes top-k selection work.
"""

import numpy as np

from .core import SupportSet, DegenerateSignalError, as_complex_signal, as_observations, top_k_indices


def spectral_scores(op, y) -> np.ndarray:
    """Magnitude-correlation scores Z_j = (1/m) * sum_i y_i |a_ij|."""
    y = as_observations(y)
    if y.size != op.m:
        raise ValueError(f"observation length {y.size} != operator m {op.m}")
    return op.envelope_scores(y)


def init_support(op, y, k: int) -> SupportSet:
    """Support estimate: indices of the k largest spectral scores."""
    scores = spectral_scores(op, y)
    return top_k_indices(scores.astype(np.complex128), k)


def hypergeometric_f(a: float, b: float, c: float, t: float) -> float:
    """Gauss hypergeometric series sum_i (a)_i (b)_i / (c)_i * t^i / i!.

    Direct term recursion, truncated once the remaining tail is provably
    below 1e-14 of the partial sum. Two tail bounds are combined: a
    geometric one with limiting ratio t (valid because the parameter
    envelope enforced below keeps every term ratio at most t), and an
    algebraic one covering t = 1, where the terms decay like
    i^-(c+1-a-b). The (-1/2, -1/2; 1; t) instance used by the score
    expectation sits comfortably inside the envelope for all t in [0, 1].
    """
    if c <= 0 and float(c).is_integer():
        raise ValueError("c must not be a nonpositive integer")
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    # envelope under which |T_{i+1}/T_i| <= t for every i
    if not ((a <= 1 and b <= c) or (b <= 1 and a <= c)):
        raise ValueError("series truncation bound needs a <= 1, b <= c (or swapped)")
    if t == 1.0 and c - a - b < 1:
        raise ValueError("tail bound at t=1 needs c - a - b >= 1")
    rel_tol = 1e-14
    total = 1.0
    term = 1.0
    i = 0
    max_terms = 50_000_000
    while i < max_terms:
        term *= (a + i) * (b + i) / ((c + i) * (1.0 + i)) * t
        if term == 0.0:
            return total
        total += term
        i += 1
        tail = abs(term) * (i + 1)  # algebraic bound, decay exponent >= 2
        if t < 1.0:
            tail = min(tail, abs(term) * t / (1.0 - t))
        if tail <= rel_tol * abs(total):
            return total
    raise ArithmeticError("hypergeometric series did not converge")


def expected_score(x, j: int) -> float:
    """Expected spectral score of coordinate j for the signal x.

    Evaluates (pi/4) * ||x|| * F(-1/2, -1/2; 1; |x_j|^2 / ||x||^2).
    """
    x = as_complex_signal(x)
    norm = float(np.linalg.norm(x))
    if norm == 0.0:
        raise DegenerateSignalError("expected score undefined for the zero signal")
    t = min(abs(x[j]) ** 2 / norm**2, 1.0)
    return (np.pi / 4.0) * norm * hypergeometric_f(-0.5, -0.5, 1.0, t)
