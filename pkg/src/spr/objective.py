"""Quartic amplitude-fit loss and its Wirtinger derivatives.

The loss is f(z) = (1/2m) * sum_i (y_i^2 - |a_i^* z|^2)^2. Because f is
real-valued but not holomorphic, derivatives are taken in the Wirtinger
sense: z and conj(z) are treated as independent variables. ``grad1`` is
the component the descent methods consume; the conjugate component always
equals its elementwise conjugate, which ``wirtinger_gradient`` computes
through an independent arithmetic path so the identity stays testable.

Closed-form expectations over fresh Gaussian rows (``expected_loss``,
``expected_grad1``, ``expected_hessian``) back the stationary-point and
concentration checks in :mod:`spr.analysis`.

Hessians are dense 2n x 2n objects meant for verification at n <= ~200;
the solver never forms them.
"""

from dataclasses import dataclass

import numpy as np

from .core import DimensionMismatch, SupportSet, as_complex_signal, as_observations, restrict
from .sampling import Fourier2DOperator, GaussianOperator


def _check(op, y, z):
    y = as_observations(y)
    z = as_complex_signal(z)
    if y.size != op.m:
        raise DimensionMismatch(f"observation length {y.size} != operator m {op.m}")
    if z.size != op.n:
        raise DimensionMismatch(f"signal length {z.size} != operator n {op.n}")
    return y, z


def loss(op, y, z) -> float:
    """Quartic amplitude-fit loss (1/2m) * sum_i (y_i^2 - |a_i^* z|^2)^2."""
    y, z = _check(op, y, z)
    r = np.square(y) - np.square(np.abs(op.forward(z)))
    return float(r @ r) / (2.0 * op.m)


def grad1(op, y, z) -> np.ndarray:
    """First Wirtinger gradient component of the loss at z.

    Equals (1/m) * sum_i (|a_i^* z|^2 - y_i^2) (a_i a_i^*) z. For a
    real-valued objective this is the steepest-descent direction of the
    underlying real parametrization, up to a constant absorbed into the
    step size.
    """
    y, z = _check(op, y, z)
    v = op.forward(z)
    w = np.square(np.abs(v)) - np.square(y)
    return op.adjoint(w * v) / op.m


def grad1_restricted(op, y, z, support: SupportSet) -> np.ndarray:
    """``grad1`` with every entry outside the support set zeroed."""
    g = grad1(op, y, z)
    return restrict(g, support)


def grad1_fourier2d(op: Fourier2DOperator, y, z) -> np.ndarray:
    """FFT fast path for ``grad1`` under 2D Fourier sampling.

    Filters the spectrum of z by the squared-magnitude residual and
    transforms back. The inverse transform's 1/N cancels against the
    operator having exactly N = height * width samples, making this equal
    to ``grad1`` with the equivalent dense DFT rows.
    """
    y, z = _check(op, y, z)
    spectrum = np.fft.fft2(np.asarray(z).reshape(op.height, op.width))
    w = np.square(np.abs(spectrum)) - np.square(y).reshape(op.height, op.width)
    return np.fft.ifft2(w * spectrum).ravel()


@dataclass
class WirtingerGradient:
    """Both Wirtinger gradient components; d_zbar == conj(d_z) for real loss."""

    d_z: np.ndarray
    d_zbar: np.ndarray


def wirtinger_gradient(op, y, z) -> WirtingerGradient:
    """Compute both gradient components through independent arithmetic.

    ``d_zbar`` is evaluated from its own defining sum rather than by
    conjugating ``d_z``, so the conjugate-pair identity remains a
    meaningful numerical check.
    """
    y, z = _check(op, y, z)
    if not isinstance(op, GaussianOperator):
        raise TypeError("dual-path gradient needs explicit rows (GaussianOperator)")
    rows = op.rows
    v = np.conj(rows @ np.conj(z))
    w = np.square(np.abs(v)) - np.square(y)
    d_z = rows.T @ (w * v) / op.m
    # conjugate component: (1/m) sum_i w_i conj(a_i) (a_i^T conj(z))
    v2 = rows @ np.conj(z)
    d_zbar = np.conj(rows).T @ (w * v2) / op.m
    return WirtingerGradient(d_z=d_z, d_zbar=d_zbar)


@dataclass
class WirtingerHessian:
    """Four n x n blocks of the Wirtinger Hessian, [[b11, b12], [b21, b22]]."""

    b11: np.ndarray
    b12: np.ndarray
    b21: np.ndarray
    b22: np.ndarray

    def assemble(self) -> np.ndarray:
        """Stack the blocks into the full 2n x 2n (Hermitian) matrix."""
        top = np.hstack([self.b11, self.b12])
        bottom = np.hstack([self.b21, self.b22])
        return np.vstack([top, bottom])

    def quad_form(self, delta) -> float:
        """Curvature [delta; conj(delta)]^* H [delta; conj(delta)] (real)."""
        delta = as_complex_signal(delta)
        if delta.size != self.b11.shape[0]:
            raise DimensionMismatch("direction length does not match Hessian blocks")
        stacked = np.concatenate([delta, np.conj(delta)])
        return float(np.real(np.vdot(stacked, self.assemble() @ stacked)))


def hessian(op: GaussianOperator, y, z) -> WirtingerHessian:
    """Empirical Wirtinger Hessian of the loss at z (dense verification path).

    Each block is accumulated from its own defining sum so the Hermitian
    structure of the assembled matrix is a nontrivial check.
    """
    if not isinstance(op, GaussianOperator):
        raise TypeError("dense Hessian needs explicit rows (GaussianOperator)")
    y, z = _check(op, y, z)
    rows = op.rows
    m = op.m
    v = np.conj(rows @ np.conj(z))
    w = 2.0 * np.square(np.abs(v)) - np.square(y)
    b11 = (rows.T * w) @ np.conj(rows) / m
    b12 = (rows.T * np.square(v)) @ rows / m
    b21 = (np.conj(rows).T * np.square(np.conj(v))) @ np.conj(rows) / m
    b22 = (np.conj(rows).T * w) @ rows / m
    return WirtingerHessian(b11=b11, b12=b12, b21=b21, b22=b22)


def _check_pair(x, z):
    x = as_complex_signal(x)
    z = as_complex_signal(z)
    if x.shape != z.shape:
        raise DimensionMismatch("signals have different lengths")
    return x, z


def expected_loss(x, z) -> float:
    """Expectation of the loss over fresh Gaussian rows, in closed form."""
    x, z = _check_pair(x, z)
    nx2 = np.vdot(x, x).real
    nz2 = np.vdot(z, z).real
    return float(nx2**2 + nz2**2 - nx2 * nz2 - abs(np.vdot(x, z)) ** 2)


def expected_grad1(x, z) -> np.ndarray:
    """Closed-form expectation of ``grad1``: ((2||z||^2 - ||x||^2) I - x x^*) z."""
    x, z = _check_pair(x, z)
    nx2 = np.vdot(x, x).real
    nz2 = np.vdot(z, z).real
    return (2.0 * nz2 - nx2) * z - x * np.vdot(x, z)


def expected_hessian(x, z) -> WirtingerHessian:
    """Closed-form expectation of the Wirtinger Hessian blocks."""
    x, z = _check_pair(x, z)
    n = x.size
    nx2 = np.vdot(x, x).real
    nz2 = np.vdot(z, z).real
    shift = (2.0 * nz2 - nx2) * np.eye(n)
    b11 = 2.0 * np.outer(z, np.conj(z)) - np.outer(x, np.conj(x)) + shift
    b12 = 2.0 * np.outer(z, z)
    b21 = 2.0 * np.outer(np.conj(z), np.conj(z))
    b22 = np.conj(b11)
    return WirtingerHessian(b11=b11, b12=b12, b21=b21, b22=b22)
