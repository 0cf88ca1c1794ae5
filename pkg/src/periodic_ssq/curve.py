"""Closed curves, their trapezoidal discretization, and complex preimages.

A curve is identified with its parametrization ``gamma(t)``, ``t`` in
[0, 2pi), sampled at ``N`` equispaced nodes. Only the samples are used by
the quadrature; the analytic continuation needed to locate ``t*`` with
``gamma(t*) = z`` comes from the trigonometric interpolant of the samples.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import spectral
from .exceptions import (DegenerateCurveError, EvaluationOutOfRangeError,
                         InvalidDiscretizationError, OnCurveError)

INTERIOR = "interior"
EXTERIOR = "exterior"

NEWTON_TOL = 1e-14
NEWTON_MAX_ITER = 50

# multiplier on the rounding bound eps * sum_k |c_k e^{ikt}| of series evaluation
_ROUNDING_SAFETY = 8.0
# relative rounding floor above which the continuation is considered unusable
_MAX_FLOOR = 1e-8
# modes of gamma below this fraction of the largest coefficient are roundoff
_RESOLVED_FRACTION = 1e-15


@dataclass(frozen=True, eq=False)
class CurveDiscretization:
    """Equispaced trapezoidal discretization of a closed curve.

    Build with :meth:`from_samples` or one of the ``make_*`` helpers.
    """

    gamma: np.ndarray
    dgamma: np.ndarray
    gamma_series: spectral.FourierSeries
    dgamma_series: spectral.FourierSeries

    @classmethod
    def from_samples(cls, gamma, dgamma=None):
        """Discretization from node samples of ``gamma`` and ``gamma'``.

        If ``dgamma`` is omitted it is obtained by spectral differentiation.
        """
        gamma = np.array(gamma, dtype=complex)
        n = len(gamma)
        if n < 3:
            raise InvalidDiscretizationError(f"need at least 3 nodes, got {n}")
        gs = spectral.fit_series(gamma)
        if dgamma is None:
            dgamma = spectral.eval_at_nodes(spectral.differentiate(gs))
        dgamma = np.array(dgamma, dtype=complex)
        if dgamma.shape != gamma.shape:
            raise InvalidDiscretizationError("gamma and dgamma lengths differ")
        if np.any(np.abs(dgamma) == 0):
            raise DegenerateCurveError("parametrization speed vanishes at a node")
        gamma.setflags(write=False)
        dgamma.setflags(write=False)
        return cls(gamma, dgamma, gs, spectral.fit_series(dgamma))

    @property
    def n(self):
        return len(self.gamma)

    @cached_property
    def nodes(self):
        return spectral.nodes(self.n)

    @property
    def weight(self):
        return 2 * np.pi / self.n

    @cached_property
    def speed(self):
        return np.abs(self.dgamma)

    @cached_property
    def d2gamma(self):
        """Second derivative at the nodes, from the series of ``gamma'``."""
        return spectral.eval_at_nodes(spectral.differentiate(self.dgamma_series))

    @cached_property
    def continuation_series(self):
        """``(gamma, gamma')`` series with roundoff-level trailing modes dropped.

        Aliased roundoff in the high modes is amplified by ``exp(K |Im t|)``
        off the real axis, so complex evaluation uses only resolved modes.
        """
        a = np.abs(self.gamma_series.coeffs)
        k = np.abs(self.gamma_series.modes)
        resolved = k[a > _RESOLVED_FRACTION * a.max()]
        K = max(int(resolved.max()), 1)
        gs = spectral.truncate(self.gamma_series, K)
        return gs, spectral.differentiate(gs)

    @cached_property
    def scale(self):
        """``L = max_j |gamma_j|``, the length scale of the Newton tolerance."""
        return float(np.max(np.abs(self.gamma)))

    def arclength(self):
        return float(np.sum(self.speed) * self.weight)


def _discretize(fun, dfun, n):
    if n < 3:
        raise InvalidDiscretizationError(f"need at least 3 nodes, got {n}")
    t = spectral.nodes(n)
    return CurveDiscretization.from_samples(fun(t), dfun(t))


def make_starfish(n_arms=5, amplitude=0.3, n=400):
    """``gamma(t) = (1 + amplitude cos(n_arms t)) e^{it}``."""
    if abs(amplitude) >= 1:
        raise DegenerateCurveError(f"amplitude {amplitude} must be below 1")

    def fun(t):
        return (1 + amplitude * np.cos(n_arms * t)) * np.exp(1j * t)

    def dfun(t):
        e = np.exp(1j * t)
        return (-amplitude * n_arms * np.sin(n_arms * t)
                + 1j * (1 + amplitude * np.cos(n_arms * t))) * e

    return _discretize(fun, dfun, n)


def make_ellipse(a, b, n):
    """``gamma(t) = a cos t + i b sin t``."""
    if a <= 0 or b <= 0:
        raise DegenerateCurveError("semi-axes must be positive")
    return _discretize(lambda t: a * np.cos(t) + 1j * b * np.sin(t),
                       lambda t: -a * np.sin(t) + 1j * b * np.cos(t), n)


def make_circle(radius, n):
    return make_ellipse(radius, radius, n)


def nearest_node(disc, z):
    """Index of the node closest to ``z``; ties go to the smallest index."""
    return int(np.argmin(np.abs(disc.gamma - z)))


def winding_number(disc, z):
    """Discrete winding integral ``(1/2 pi i) sum_j gamma'_j/(gamma_j - z) w``.

    Accurate only for ``z`` not too close to the curve; use it as an oracle
    for side classification at moderate distances.
    """
    s = np.sum(disc.dgamma / (disc.gamma - z)) * disc.weight
    return (s / (2j * np.pi)).real


def is_interior(disc, z):
    """Vectorized point-in-curve test by the discrete winding number."""
    z = np.asarray(z)
    flat = z.reshape(-1)
    out = np.empty(flat.shape, dtype=bool)
    chunk = max(1, 2_000_000 // disc.n)
    for s in range(0, len(flat), chunk):
        zz = flat[s:s + chunk, None]
        w = np.sum(disc.dgamma / (disc.gamma - zz), axis=1) * disc.weight
        out[s:s + chunk] = (w / (2j * np.pi)).real > 0.5
    return out.reshape(z.shape)


@dataclass(frozen=True)
class Preimage:
    """Complex root ``t_star`` of ``gamma(t) = z`` and solver diagnostics.

    ``tolerance`` is the absolute residual threshold the solver applied.
    """

    t_star: complex
    converged: bool
    iterations: int
    residual: float
    tolerance: float

    @property
    def side(self):
        return INTERIOR if self.t_star.imag > 0 else EXTERIOR

    @property
    def zeta(self):
        return np.exp(1j * self.t_star)


def _rounding_bound(coeffs, phase):
    return np.finfo(float).eps * np.sum(np.abs(coeffs * phase), axis=-1)


def _polish(t, zs, residual, idx, gs, dgs, steps=2):
    # extra Newton steps past the stopping test, kept only if the residual
    # does not grow; near-boundary SSQ error is proportional to the error in t*
    for _ in range(steps):
        if idx.size == 0:
            return
        phase = np.exp(1j * np.multiply.outer(t[idx], gs.modes))
        dt = (phase @ gs.coeffs - zs[idx]) / (phase @ dgs.coeffs)
        tn = t[idx] - dt
        new = np.abs(np.exp(1j * np.multiply.outer(tn, gs.modes)) @ gs.coeffs - zs[idx])
        better = np.isfinite(new) & (new <= residual[idx])
        t[idx[better]] = tn[better]
        residual[idx[better]] = new[better]
        idx = idx[better & (dt != 0)]


def find_preimage(disc, z, tol=NEWTON_TOL, max_iter=NEWTON_MAX_ITER):
    """Solve ``gamma(t*) = z`` by Newton's method on the Fourier series of gamma.

    The continuation uses only the resolved modes of gamma (see
    :attr:`CurveDiscretization.continuation_series`). Starts from the
    nearest node. Stops once ``|gamma(t) - z|`` is below
    ``tol * L`` (``L = max|gamma_j|``), or below the rounding error of the
    series evaluation at the current ``t`` if that is larger. The rounding
    floor grows like ``exp(K |Im t|)`` and dominates when the target sits
    several grid spacings away from the curve; once it exceeds ``1e-8 L``
    the continuation is no longer trusted and the solve is abandoned.
    After the stopping test passes, up to two further Newton steps are taken
    as long as they do not increase the residual.

    Divergence (a step larger than 1, non-finite values, or leaving the range
    of the overflow guard) returns ``converged=False`` instead of raising.
    """
    z = complex(z)
    j = nearest_node(disc, z)
    if disc.gamma[j] == z:
        raise OnCurveError(f"target {z} coincides with node {j}")
    return find_preimages(disc, np.array([z]), tol, max_iter, _start=[j])[0]


def find_preimages(disc, zs, tol=NEWTON_TOL, max_iter=NEWTON_MAX_ITER,
                   _start=None):
    """Vectorized :func:`find_preimage` over an array of targets.

    Targets lying exactly on a node are returned unconverged with real
    ``t_star``; callers treat them as on-curve.
    """
    zs = np.asarray(zs, dtype=complex).reshape(-1)
    m = len(zs)
    gs, dgs = disc.continuation_series
    K = gs.K
    k = gs.modes
    if _start is None:
        _start = np.empty(m, dtype=int)
        chunk = max(1, 2_000_000 // disc.n)
        for s in range(0, m, chunk):
            _start[s:s + chunk] = np.argmin(
                np.abs(disc.gamma[None, :] - zs[s:s + chunk, None]), axis=1)
    t = disc.nodes[np.asarray(_start)].astype(complex)
    abs_tol = tol * disc.scale
    residual = np.full(m, np.inf)
    thresh = np.full(m, abs_tol)
    iters = np.zeros(m, dtype=int)
    converged = np.zeros(m, dtype=bool)
    active = disc.gamma[np.asarray(_start)] != zs

    for it in range(max_iter + 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        tt = t[idx]
        ok = np.abs(tt.imag) * K <= spectral.OVERFLOW_GUARD
        tt = np.where(ok, tt, 0)
        phase = np.exp(1j * np.multiply.outer(tt, k))
        g = phase @ gs.coeffs
        res = np.abs(g - zs[idx])
        floor = _ROUNDING_SAFETY * _rounding_bound(gs.coeffs, phase)
        residual[idx] = np.where(ok, res, np.inf)
        thresh[idx] = np.maximum(abs_tol, floor)
        ok &= floor <= _MAX_FLOOR * disc.scale
        done = ok & (res <= thresh[idx])
        converged[idx[done]] = True
        active[idx[done]] = False
        active[idx[~ok]] = False
        step_idx = idx[ok & ~done]
        if it == max_iter or step_idx.size == 0:
            break
        sel = ok & ~done
        dg = phase[sel] @ dgs.coeffs
        dt = (g[sel] - zs[step_idx]) / dg
        bad = ~np.isfinite(dt) | (np.abs(dt) > 1)
        active[step_idx[bad]] = False
        good = step_idx[~bad]
        t[good] = t[good] - dt[~bad]
        iters[good] += 1

    _polish(t, zs, residual, np.flatnonzero(converged), gs, dgs)
    re = np.mod(t.real, 2 * np.pi)
    re[re >= 2 * np.pi] = 0.0
    t = re + 1j * t.imag
    return [Preimage(complex(t[i]), bool(converged[i]), int(iters[i]),
                     float(residual[i]), float(thresh[i])) for i in range(m)]
