"""Trigonometric interpolation of equispaced periodic samples.

Coefficients are stored with modes in ascending order ``-K..K`` so that
dot products against the quadrature weight vectors line up positionally.
"""
from dataclasses import dataclass

import numpy as np
import scipy.fft

from .exceptions import EvaluationOutOfRangeError, InvalidDiscretizationError

#: Largest allowed value of ``|Im t| * K`` when evaluating at complex ``t``.
OVERFLOW_GUARD = 600.0


@dataclass(frozen=True)
class FourierSeries:
    """Truncated Fourier series ``sum_k coeffs[k + K] * exp(i k t)`` on [0, 2pi).

    ``n_samples`` is the number of equispaced samples the series was fitted
    to. For even ``n_samples`` the Nyquist coefficient is split evenly between
    modes ``+K`` and ``-K``, so ``len(coeffs) == n_samples + 1``.
    """

    coeffs: np.ndarray
    n_samples: int

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or len(c) % 2 != 1:
            raise InvalidDiscretizationError(
                f"coefficient vector must have odd length, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def K(self):
        return (len(self.coeffs) - 1) // 2

    @property
    def modes(self):
        return np.arange(-self.K, self.K + 1)

    @property
    def period(self):
        return 2 * np.pi

    def __call__(self, t):
        return eval_series(self, t)


def nodes(n):
    """Equispaced parameter nodes ``t_j = 2 pi j / n``."""
    return 2 * np.pi * np.arange(n) / n


def fit_series(samples):
    """Fit the trigonometric interpolant to samples at ``t_j = 2 pi j / N``.

    Uses the normalization ``c_k = (1/N) sum_j x_j exp(-i k t_j)``. The
    transform runs in extended precision where the platform has it: roundoff
    in high modes is amplified by ``exp(K |Im t|)`` when the series is
    continued off the real axis.
    """
    x = np.asarray(samples)
    if x.ndim != 1:
        raise InvalidDiscretizationError("samples must be a 1-D vector")
    n = len(x)
    if n < 3:
        raise InvalidDiscretizationError(f"need at least 3 samples, got {n}")
    c = scipy.fft.fft(x.astype(np.clongdouble)) / n
    c = np.fft.fftshift(c.astype(complex))
    if n % 2 == 0:
        # fftshift puts the Nyquist mode first, at k = -n/2
        half = c[0] / 2
        c = np.concatenate(([half], c[1:], [half]))
    return FourierSeries(c, n)


def _modes_matrix(K, t):
    return np.exp(1j * np.multiply.outer(t, np.arange(-K, K + 1)))


def eval_series(s, t):
    """Evaluate the series at real or complex ``t`` by direct summation.

    Accepts a scalar or an array of arguments. Raises
    :class:`EvaluationOutOfRangeError` if ``|Im t| * K`` exceeds
    :data:`OVERFLOW_GUARD`.
    """
    t = np.asarray(t)
    imag = np.abs(np.imag(t))
    if imag.size and np.max(imag) * s.K > OVERFLOW_GUARD:
        raise EvaluationOutOfRangeError(
            f"|Im t| * K = {np.max(imag) * s.K:.4g} exceeds {OVERFLOW_GUARD}")
    val = _modes_matrix(s.K, t) @ s.coeffs
    if val.ndim == 0:
        return complex(val)
    return val


def eval_at_nodes(s, n=None):
    """Values of the series at the ``n`` equispaced nodes (default: its own).

    For the originating node set this is an inverse FFT, O(N log N).
    """
    n = s.n_samples if n is None else n
    if n != s.n_samples:
        return eval_series(s, nodes(n))
    c = np.asarray(s.coeffs)
    if n % 2 == 0:
        c = np.concatenate(([c[0] + c[-1]], c[1:-1]))
    return np.fft.ifft(np.fft.ifftshift(c)) * n


def differentiate(s):
    """Spectral derivative: mode ``k`` is multiplied by ``i k``."""
    return FourierSeries(1j * s.modes * s.coeffs, s.n_samples)


def truncate(s, K):
    """Drop all modes with ``|k| > K``."""
    if K >= s.K:
        return s
    return FourierSeries(s.coeffs[s.K - K:s.K + K + 1], s.n_samples)


def decay_profile(s):
    """Return ``(modes, |coeffs|)`` for diagnostics and plotting."""
    return s.modes.copy(), np.abs(s.coeffs)


def decay_rate(s, side=1, floor=1e-13):
    """Least-squares slope of ``log|c_k|`` against ``|k|`` on one side.

    Only modes with ``|c_k| > floor * max|c|`` are used; ``side`` is +1 for
    positive modes and -1 for negative modes.
    """
    k, a = decay_profile(s)
    mask = (np.sign(k) == np.sign(side)) & (a > floor * a.max())
    if mask.sum() < 2:
        raise ValueError("fewer than two resolved modes on the requested side")
    return np.polyfit(np.abs(k[mask]), np.log(a[mask]), 1)[0]
