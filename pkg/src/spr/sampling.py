"""Sampling operators, sparse test signals, and phaseless observations.

Two operator kinds share one small interface (``m``, ``n``, ``forward``,
``adjoint``, ``columns``, ``envelope_scores``):

* ``GaussianOperator`` -- a dense m x n matrix whose rows a_i have i.i.d.
  standard complex Gaussian entries (real and imaginary parts each
  N(0, 1/2), so E|a_ij|^2 = 1). A measurement is the modulus of the
  conjugated inner product |a_i^* x|.
* ``Fourier2DOperator`` -- the unnormalized 2D DFT of a height x width
  image, flattened row-major; the adjoint carries the matching N * ifft
  scaling.

Randomness always flows through explicit integer seeds feeding
``numpy.random.default_rng``; nothing touches global RNG state. Seeds may
be single ints or sequences of ints.
"""

import numpy as np

from .core import DimensionMismatch, as_complex_signal, as_observations

_SQRT_HALF = 1.0 / np.sqrt(2.0)


class GaussianOperator:
    """Dense complex Gaussian sampling matrix with rows a_1, ..., a_m."""

    def __init__(self, rows):
        rows = np.asarray(rows, dtype=np.complex128)
        if rows.ndim != 2 or rows.shape[0] < 1 or rows.shape[1] < 1:
            raise ValueError("rows must be a nonempty 2-d array")
        if not np.all(np.isfinite(rows)):
            raise ValueError("operator entries must be finite")
        self.rows = rows

    @property
    def m(self) -> int:
        return self.rows.shape[0]

    @property
    def n(self) -> int:
        return self.rows.shape[1]

    def forward(self, z) -> np.ndarray:
        """Conjugated inner products (a_i^* z) for all rows."""
        # a_i^* z == conj(a_i^T conj(z)); avoids materializing conj(rows)
        return np.conj(self.rows @ np.conj(z))

    def adjoint(self, u) -> np.ndarray:
        """Adjoint of ``forward``: sum_i u_i a_i."""
        return self.rows.T @ u

    def columns(self, indices) -> "GaussianOperator":
        """Operator restricted to a column subset (a view for subspace solves)."""
        return GaussianOperator(np.ascontiguousarray(self.rows[:, indices]))

    def envelope_scores(self, y) -> np.ndarray:
        """Per-column magnitude correlations (1/m) * sum_i y_i |a_ij|."""
        return (y @ np.abs(self.rows)) / self.m


class Fourier2DOperator:
    """Unnormalized 2D DFT sampling of a height x width image.

    Signals are flattened row-major; the number of samples equals the
    number of pixels (m = n = height * width). Every matrix entry of the
    equivalent dense operator has unit modulus.
    """

    def __init__(self, height: int, width: int):
        if height < 1 or width < 1:
            raise ValueError("image dimensions must be >= 1")
        self.height = int(height)
        self.width = int(width)

    @property
    def m(self) -> int:
        return self.height * self.width

    @property
    def n(self) -> int:
        return self.height * self.width

    def forward(self, z) -> np.ndarray:
        grid = np.asarray(z).reshape(self.height, self.width)
        return np.fft.fft2(grid).ravel()

    def adjoint(self, u) -> np.ndarray:
        grid = np.asarray(u).reshape(self.height, self.width)
        return (np.fft.ifft2(grid) * (self.height * self.width)).ravel()

    def columns(self, indices) -> "_FourierSupportView":
        return _FourierSupportView(self, np.asarray(indices, dtype=np.int64))

    def envelope_scores(self, y) -> np.ndarray:
        # |a_ij| == 1 for every DFT entry, so the scores are flat
        return np.full(self.n, float(np.mean(y)))


class _FourierSupportView:
    """Column restriction of a Fourier operator to a support index set."""

    def __init__(self, op: Fourier2DOperator, indices: np.ndarray):
        self._op = op
        self._indices = indices

    @property
    def m(self) -> int:
        return self._op.m

    @property
    def n(self) -> int:
        return int(self._indices.size)

    def forward(self, u) -> np.ndarray:
        z = np.zeros(self._op.n, dtype=np.complex128)
        z[self._indices] = u
        return self._op.forward(z)

    def adjoint(self, c) -> np.ndarray:
        return self._op.adjoint(c)[self._indices]


def gen_gaussian_operator(m: int, n: int, seed) -> GaussianOperator:
    """Draw an m x n matrix of i.i.d. standard complex Gaussian entries.

    Deterministic for a fixed seed. Entries are drawn row by row
    (real/imaginary interleaved), so for a shared seed the first rows of a
    taller matrix coincide with a shorter one -- useful for common random
    numbers across a sweep over m.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    rng = np.random.default_rng(seed)
    parts = rng.standard_normal((m, n, 2))
    return GaussianOperator((parts[..., 0] + 1j * parts[..., 1]) * _SQRT_HALF)


def gen_sparse_signal(n: int, k: int, flavor: str = "gaussian", seed=0, support=None) -> np.ndarray:
    """Generate a k-sparse length-n complex signal.

    flavor:
        "gaussian" -- nonzeros i.i.d. standard complex Gaussian
        "flat"     -- nonzeros of unit modulus with uniform random phases
        "unit"     -- nonzeros all equal to 1

    The support is uniformly random unless an explicit index set is given.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    rng = np.random.default_rng(seed)
    if support is None:
        support = rng.choice(n, size=k, replace=False)
    support = np.unique(np.asarray(support, dtype=np.int64))
    if support.size != k or support[0] < 0 or support[-1] >= n:
        raise ValueError("support must hold k distinct indices in [0, n)")
    if flavor == "gaussian":
        parts = rng.standard_normal((k, 2))
        values = (parts[:, 0] + 1j * parts[:, 1]) * _SQRT_HALF
    elif flavor == "flat":
        values = np.exp(2j * np.pi * rng.random(k))
    elif flavor == "unit":
        values = np.ones(k, dtype=np.complex128)
    else:
        raise ValueError(f"unknown flavor {flavor!r}")
    x = np.zeros(n, dtype=np.complex128)
    x[support] = values
    return x


def observe(op, x) -> np.ndarray:
    """Magnitude-only measurements y_i = |a_i^* x|."""
    x = as_complex_signal(x)
    if x.size != op.n:
        raise DimensionMismatch(f"signal length {x.size} != operator n {op.n}")
    return np.abs(op.forward(x))


def observe_fourier2d(op: Fourier2DOperator, image) -> np.ndarray:
    """Moduli of the unnormalized 2D DFT of an image (row-major flattening)."""
    flat = np.asarray(image, dtype=np.complex128).ravel()
    return observe(op, flat)


def mean_square_observation(y) -> float:
    """Mean of y_i^2; an unbiased proxy for ||x||^2 under Gaussian sampling."""
    y = as_observations(y)
    return float(np.mean(np.square(y)))
