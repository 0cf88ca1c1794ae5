"""Singularity swap quadrature on trapezoidal discretizations.

The near singularity of the integrand at the preimage ``t*`` is swapped for
the factor ``1/(e^{it} - e^{it*})``. What remains is smooth, so it is
replaced by its trigonometric interpolant and integrated against modal
weights that are known in closed form on the unit circle:

    p_k^m(t*) = int_0^{2pi} e^{ikt} / (e^{it} - e^{it*})^m dt
    q_k(t*)   = int_0^{2pi} e^{ikt} log(e^{it} - e^{it*}) dt

Weight vectors are indexed by mode ``k = -K..K`` in ascending order, the
same layout as :class:`periodic_ssq.spectral.FourierSeries`.
"""
from dataclasses import dataclass
from math import factorial

import numpy as np

from . import spectral
from .curve import find_preimage, find_preimages
from .exceptions import (ContractViolationError, InvalidDiscretizationError,
                         InvalidOrderError, OnCurveError)

TRAPEZOIDAL = "trapezoidal"
SSQ = "ssq"

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class SsqWeights:
    """Modal quadrature weights for one target.

    ``kind`` is ``"cauchy"``, ``"power<m>"`` or ``"log"``.
    """

    kind: str
    t_star: complex
    values: np.ndarray

    @property
    def K(self):
        return (len(self.values) - 1) // 2

    @property
    def modes(self):
        return np.arange(-self.K, self.K + 1)


@dataclass(frozen=True)
class EvalReport:
    value: complex
    method: str
    im_tstar: float = None
    preimage_converged: bool = False
    iterations: int = 0
    residual: float = None


def _check_t_star(t_star):
    t_star = complex(t_star)
    if t_star.imag == 0:
        raise OnCurveError(f"t* = {t_star} is real: target lies on the curve")
    return t_star


def pk_power(t_star, K, m):
    """Weights ``p_k^m(t*)`` for the kernel ``1/(e^{it} - e^{it*})^m``.

    By residues on the unit circle, with ``zeta = e^{it*}``:
    ``2 pi C(k-1, m-1) zeta^{k-m}`` for interior ``t*`` and ``k >= m``,
    minus the same for exterior ``t*`` and ``k <= 0``, zero otherwise.
    """
    if int(m) != m or m < 1:
        raise InvalidOrderError(f"kernel order must be a positive integer, got {m}")
    m = int(m)
    t_star = _check_t_star(t_star)
    k = np.arange(-K, K + 1)
    if t_star.imag > 0:
        mask, sign = k >= m, 1.0
    else:
        mask, sign = k <= 0, -1.0
    kk = k[mask]
    binom = np.ones(len(kk))
    for j in range(1, m):
        binom *= kk - j
    binom /= factorial(m - 1)
    values = np.zeros(2 * K + 1, dtype=complex)
    values[mask] = sign * 2 * np.pi * binom * np.exp(1j * (kk - m) * t_star)
    kind = "cauchy" if m == 1 else f"power{m}"
    return SsqWeights(kind, t_star, values)


def pk_cauchy(t_star, K):
    """Weights ``p_k(t*) = int e^{ikt}/(e^{it} - e^{it*}) dt``, ``|k| <= K``."""
    return pk_power(t_star, K, 1)


def qk_log(t_star, K):
    """Weights ``q_k(t*) = int e^{ikt} log(e^{it} - e^{it*}) dt``, ``|k| <= K``.

    For interior ``t*`` the branch cut of the logarithm runs from
    ``e^{it*}`` through 1. Only the real part of ``q_0`` is meaningful
    (the imaginary part depends on the branch) and only it is stored.
    """
    t_star = _check_t_star(t_star)
    k = np.arange(-K, K + 1)
    values = np.zeros(2 * K + 1, dtype=complex)
    neg, pos = k < 0, k > 0
    if t_star.imag < 0:
        values[neg] = 2 * np.pi * np.exp(1j * k[neg] * t_star) / k[neg]
        values[K] = -2 * np.pi * t_star.imag
    else:
        values[neg] = 2 * np.pi / k[neg]
        values[pos] = 2 * np.pi / k[pos] * (1 - np.exp(1j * k[pos] * t_star))
    return SsqWeights("log", t_star, values)


def as_density(disc, sigma, real=False):
    """Validate density samples against a discretization."""
    sigma = np.asarray(sigma)
    if sigma.shape != (disc.n,):
        raise InvalidDiscretizationError(
            f"density has shape {sigma.shape}, expected ({disc.n},)")
    if real:
        if np.iscomplexobj(sigma):
            if np.any(sigma.imag != 0):
                raise ValueError("log kernel requires a real-valued density")
            sigma = sigma.real
        return sigma.astype(float)
    return sigma.astype(complex)


def _check_off_nodes(disc, z):
    d = disc.gamma - z
    if np.any(d == 0):
        raise OnCurveError(f"target {z} coincides with a quadrature node")
    return d


def _check_preimage(pre):
    if not pre.converged:
        raise ContractViolationError("SSQ evaluation needs a converged preimage")
    return _check_t_star(pre.t_star)


def eval_cauchy_trapz(disc, sigma, z, m=1):
    """Plain trapezoidal rule for ``int sigma dtau / (tau - z)^m``."""
    sigma = as_density(disc, sigma)
    d = _check_off_nodes(disc, complex(z))
    return complex(np.sum(sigma * disc.dgamma / d**m) * disc.weight)


eval_power_trapz = eval_cauchy_trapz


def eval_power_ssq(disc, sigma, z, pre, m):
    """SSQ for ``int sigma dtau / (tau - z)^m`` given the preimage of ``z``."""
    t_star = _check_preimage(pre)
    sigma = as_density(disc, sigma)
    d = _check_off_nodes(disc, complex(z))
    swap = np.exp(1j * disc.nodes) - np.exp(1j * t_star)
    f = sigma * disc.dgamma * (swap / d)**m
    fhat = spectral.fit_series(f)
    return complex(fhat.coeffs @ pk_power(t_star, fhat.K, m).values)


def eval_cauchy_ssq(disc, sigma, z, pre):
    """SSQ for the Cauchy integral ``int sigma dtau / (tau - z)``."""
    return eval_power_ssq(disc, sigma, z, pre, 1)


def eval_log_trapz(disc, sigma, z):
    """Plain trapezoidal rule for ``int sigma log|tau - z| |dtau|``."""
    sigma = as_density(disc, sigma, real=True)
    d = _check_off_nodes(disc, complex(z))
    return float(np.sum(sigma * disc.speed * np.log(np.abs(d))) * disc.weight)


def eval_log_ssq(disc, sigma, z, pre):
    """SSQ for ``int sigma log|tau - z| |dtau|``.

    The log is split into ``log|(gamma - z)/(e^{it} - e^{it*})|``, which is
    smooth and handled by the trapezoidal rule, plus
    ``log|e^{it} - e^{it*}|``, integrated against the interpolant of
    ``sigma |gamma'|`` with the weights of :func:`qk_log`.
    """
    t_star = _check_preimage(pre)
    sigma = as_density(disc, sigma, real=True)
    d = _check_off_nodes(disc, complex(z))
    f = sigma * disc.speed
    swap = np.abs(np.exp(1j * disc.nodes) - np.exp(1j * t_star))
    smooth = np.sum(f * np.log(np.abs(d) / swap)) * disc.weight
    fhat = spectral.fit_series(f)
    return float(smooth + (fhat.coeffs @ qk_log(t_star, fhat.K).values).real)


def parse_kernel(kernel):
    """Map ``"log"``, ``"cauchy"``, ``"power<m>"`` or an integer to ``(name, m)``.

    ``m`` is None for the log kernel.
    """
    if isinstance(kernel, (int, np.integer)):
        m = int(kernel)
    elif kernel == "log":
        return "log", None
    elif kernel == "cauchy":
        m = 1
    elif isinstance(kernel, str) and kernel.startswith("power"):
        try:
            m = int(kernel[5:])
        except ValueError:
            raise InvalidOrderError(f"unknown kernel {kernel!r}") from None
    else:
        raise InvalidOrderError(f"unknown kernel {kernel!r}")
    if m < 1:
        raise InvalidOrderError(f"kernel order must be positive, got {m}")
    return ("cauchy" if m == 1 else f"power{m}"), m


def ssq_band(disc, tol=DEFAULT_TOL):
    """Largest ``|Im t*|`` routed to SSQ: the trapezoidal error model
    ``exp(-N |Im t*|)`` equals ``tol`` at this distance."""
    return np.log(1 / tol) / disc.n


def _trapz(disc, sigma, z, name, m):
    if name == "log":
        return eval_log_trapz(disc, sigma, z)
    return eval_cauchy_trapz(disc, sigma, z, m)


def _ssq(disc, sigma, z, pre, name, m):
    if name == "log":
        return eval_log_ssq(disc, sigma, z, pre)
    return eval_power_ssq(disc, sigma, z, pre, m)


def eval_auto(disc, sigma, z, kernel="cauchy", tol=DEFAULT_TOL, force=None):
    """Evaluate a layer potential, switching to SSQ close to the curve.

    SSQ is used when the preimage converges and ``|Im t*| < ln(1/tol)/N``;
    otherwise the plain trapezoidal rule. ``force`` may be ``"ssq"`` or
    ``"trapezoidal"`` to override the choice (forced SSQ still needs a
    converged preimage and falls back otherwise).
    """
    name, m = parse_kernel(kernel)
    z = complex(z)
    _check_off_nodes(disc, z)
    pre = find_preimage(disc, z)
    use_ssq = pre.converged and abs(pre.t_star.imag) < ssq_band(disc, tol)
    if force == TRAPEZOIDAL:
        use_ssq = False
    elif force == SSQ:
        use_ssq = pre.converged
    if use_ssq:
        value, method = _ssq(disc, sigma, z, pre, name, m), SSQ
    else:
        value, method = _trapz(disc, sigma, z, name, m), TRAPEZOIDAL
    return EvalReport(value, method, pre.t_star.imag if pre.converged else None,
                      pre.converged, pre.iterations, pre.residual)


def eval_auto_many(disc, sigma, zs, kernel="cauchy", tol=DEFAULT_TOL,
                   force=None, preimages=None):
    """Vectorized :func:`eval_auto` over many targets.

    Returns ``(values, used_ssq)`` arrays shaped like ``zs``. Targets outside
    the SSQ band are summed with the trapezoidal rule in blocks.
    ``preimages`` may be passed in if already computed for ``zs.ravel()``.
    """
    name, m = parse_kernel(kernel)
    zs = np.asarray(zs, dtype=complex)
    flat = zs.reshape(-1)
    sig = as_density(disc, sigma, real=name == "log")
    hits = flat[np.isin(flat, disc.gamma)]
    if hits.size:
        raise OnCurveError(f"target {hits[0]} coincides with a quadrature node")

    if force == TRAPEZOIDAL:
        use_ssq = np.zeros(len(flat), dtype=bool)
        pres = [None] * len(flat)
    else:
        pres = find_preimages(disc, flat) if preimages is None else preimages
        conv = np.array([p.converged for p in pres], dtype=bool)
        im = np.array([abs(p.t_star.imag) for p in pres])
        use_ssq = conv if force == SSQ else conv & (im < ssq_band(disc, tol))

    values = np.empty(len(flat), dtype=float if name == "log" else complex)
    far = np.flatnonzero(~use_ssq)
    chunk = max(1, 2_000_000 // disc.n)
    for s in range(0, len(far), chunk):
        idx = far[s:s + chunk]
        d = disc.gamma[None, :] - flat[idx, None]
        if name == "log":
            values[idx] = (np.log(np.abs(d)) @ (sig * disc.speed)) * disc.weight
        else:
            values[idx] = ((1 / d**m) @ (sig * disc.dgamma)) * disc.weight
    for i in np.flatnonzero(use_ssq):
        values[i] = _ssq(disc, sig, flat[i], pres[i], name, m)
    return values.reshape(zs.shape), use_ssq.reshape(zs.shape)
