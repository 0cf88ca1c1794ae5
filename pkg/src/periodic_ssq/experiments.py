"""Test geometries, reference solutions and the numerical experiments.

Three experiments are provided:

* :func:`laplace_demo` solves the interior Dirichlet problem with boundary
  data ``log|3 + 3i - z|`` and tabulates the error on a grid;
* :func:`convergence_table` measures the max error of the trapezoidal rule
  and SSQ over targets ``z = gamma(t*)`` with ``Im t* = +-d``;
* :func:`decay_data` compares the Fourier coefficients of the raw Cauchy
  integrand with those of the regularized integrand.
"""
import math
import warnings
from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from . import bie, curve, spectral, ssq
from .exceptions import DegenerateCurveError

INTERIOR, EXTERIOR = curve.INTERIOR, curve.EXTERIOR
DEFAULT_D = (0.01, 0.02, 0.04)
N_TARGETS = 100


@dataclass(frozen=True)
class Geometry:
    """A closed curve with its exact parametrization and derivative."""

    name: str
    fun: object
    dfun: object

    def discretize(self, n):
        t = spectral.nodes(n)
        return curve.CurveDiscretization.from_samples(self.fun(t), self.dfun(t))


def _starfish(t, n_arms, amplitude):
    return (1 + amplitude * np.cos(n_arms * t)) * np.exp(1j * t)


def _dstarfish(t, n_arms, amplitude):
    return (-amplitude * n_arms * np.sin(n_arms * t)
            + 1j * (1 + amplitude * np.cos(n_arms * t))) * np.exp(1j * t)


def starfish(n_arms=5, amplitude=0.3):
    if abs(amplitude) >= 1:
        raise DegenerateCurveError(f"starfish amplitude {amplitude} must satisfy |a| < 1")
    return Geometry("starfish", partial(_starfish, n_arms=n_arms, amplitude=amplitude),
                    partial(_dstarfish, n_arms=n_arms, amplitude=amplitude))


def ellipse(a=1.0, b=1.0):
    return Geometry("ellipse", lambda t: a * np.cos(t) + 1j * b * np.sin(t),
                    lambda t: -a * np.sin(t) + 1j * b * np.cos(t))


def circle(radius=1.0):
    g = ellipse(radius, radius)
    return Geometry("circle", g.fun, g.dfun)


def make_geometry(name, **params):
    factories = {"starfish": starfish, "circle": circle, "ellipse": ellipse}
    try:
        return factories[name](**params)
    except KeyError:
        raise ValueError(f"unknown geometry {name!r}") from None


# --- reference solutions -------------------------------------------------

def log_density(geom):
    """Density ``sigma(t) = g_1(t) g_2(t)`` as a function of the parameter."""
    return lambda t: geom.fun(t).real * geom.fun(t).imag


def power_density(side):
    """``tau^3 + tau`` for interior targets, ``1/tau`` for exterior ones."""
    if side == INTERIOR:
        return lambda tau: tau**3 + tau
    return lambda tau: 1 / tau


def power_reference(z, m, side):
    """Exact ``int sigma dtau / (tau - z)^m`` for the :func:`power_density`.

    Interior: ``2 pi i sigma^{(m-1)}(z) / (m-1)!`` by the residue at ``z``.
    Exterior: only the pole of ``1/tau`` at the origin contributes, giving
    ``2 pi i (-z)^{-m}``.
    """
    if side == INTERIOR:
        # derivatives of tau^3 + tau
        derivs = [z**3 + z, 3 * z**2 + 1, 6 * z, 6 + 0 * z]
        dm = derivs[m - 1] if m <= 4 else 0 * z
        return 2j * np.pi * dm / math.factorial(m - 1)
    return 2j * np.pi * (-z)**(-m)


def log_reference(geom, z, t_hint=None, density=None):
    """``int sigma |gamma'| log|gamma - z| dt`` by adaptive Gauss-Kronrod.

    The integration interval is centred on ``t_hint`` (usually ``Re t*``)
    with a breakpoint there so QUADPACK resolves the near-singular peak.
    """
    density = log_density(geom) if density is None else density
    c = 0.0 if t_hint is None else float(t_hint)

    def integrand(t):
        return density(t) * abs(geom.dfun(t)) * math.log(abs(geom.fun(t) - z))

    with warnings.catch_warnings():
        # QUADPACK flags roundoff once it reaches machine precision
        warnings.simplefilter("ignore", IntegrationWarning)
        val, _ = quad(integrand, c - np.pi, c + np.pi, points=[c], epsabs=1e-15,
                      epsrel=1e-15, limit=2000)
    return val


def power_quad_reference(geom, sigma, z, m):
    """``int sigma(gamma) gamma' / (gamma - z)^m dt`` by adaptive quadrature.

    Independent of the residue formulas; used to confirm them.
    """
    def f(t):
        return sigma(geom.fun(t)) * geom.dfun(t) / (geom.fun(t) - z)**m

    opts = dict(epsabs=1e-14, epsrel=1e-14, limit=2000)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        re, _ = quad(lambda t: f(t).real, 0, 2 * np.pi, **opts)
        im, _ = quad(lambda t: f(t).imag, 0, 2 * np.pi, **opts)
    return re + 1j * im


def target_preimages(d, side, n_targets=N_TARGETS, jitter_seed=None):
    """``t*`` values with equispaced real parts and ``Im t* = +-d``.

    The real parts are offset by half a spacing so that no target lines up
    with a node of a discretization whose size divides ``n_targets``.
    With ``jitter_seed`` the real parts are perturbed randomly within one
    spacing.
    """
    h = 2 * np.pi / n_targets
    re = h * (np.arange(n_targets) + 0.5)
    if jitter_seed is not None:
        rng = np.random.default_rng(jitter_seed)
        re = re + rng.uniform(-0.5, 0.5, n_targets) * h
    sign = 1 if side == INTERIOR else -1
    return re + 1j * sign * abs(d)


# --- convergence ---------------------------------------------------------

def _targets(geom, kernel, side, d, n_targets, jitter_seed, cache):
    key = (geom.name, kernel, side, d, n_targets, jitter_seed)
    if key not in cache:
        name, m = ssq.parse_kernel(kernel)
        ts = target_preimages(d, side, n_targets, jitter_seed)
        zs = geom.fun(ts)
        if name == "log":
            refs = np.array([log_reference(geom, z, t.real) for z, t in zip(zs, ts)])
        else:
            refs = power_reference(zs, m, side)
        cache[key] = (zs, refs)
    return cache[key]


def convergence_row(geom, kernel, side, d, n, n_targets=N_TARGETS,
                    jitter_seed=None, cache=None):
    """Max errors of the trapezoidal rule and SSQ for one ``(N, d)`` cell.

    Targets whose preimage does not converge are evaluated with the
    trapezoidal rule in place of SSQ and counted in ``flags``.
    """
    cache = {} if cache is None else cache
    name, m = ssq.parse_kernel(kernel)
    zs, refs = _targets(geom, kernel, side, d, n_targets, jitter_seed, cache)
    disc = geom.discretize(n)
    if name == "log":
        sigma = log_density(geom)(disc.nodes)
    else:
        sigma = power_density(side)(disc.gamma)
    err_t = err_s = 0.0
    failed = 0
    for z, ref, pre in zip(zs, refs, curve.find_preimages(disc, zs)):
        if name == "log":
            trap = ssq.eval_log_trapz(disc, sigma, z)
        else:
            trap = ssq.eval_cauchy_trapz(disc, sigma, z, m)
        if pre.converged and pre.t_star.imag != 0:
            val = (ssq.eval_log_ssq(disc, sigma, z, pre) if name == "log"
                   else ssq.eval_power_ssq(disc, sigma, z, pre, m))
        else:
            failed += 1
            val = trap
        err_t = max(err_t, abs(trap - ref))
        err_s = max(err_s, abs(val - ref))
    flags = f"preimage_failed={failed}" if failed else ""
    return dict(kernel=ssq.parse_kernel(kernel)[0], side=side, d=float(d),
                N=int(n), err_trapz=float(err_t), err_ssq=float(err_s), flags=flags)


def convergence_table(geom, kernel, sides, n_values, d_values=DEFAULT_D,
                      n_targets=N_TARGETS, jitter_seed=None):
    """Rows ``kernel, side, d, N, err_trapz, err_ssq, flags`` in run order
    (side, then d, then N)."""
    cache = {}
    return [convergence_row(geom, kernel, side, d, n, n_targets, jitter_seed, cache)
            for side in sides for d in d_values for n in n_values]


def fit_rate(n_values, errors, window=(1e-12, 1e-2)):
    """Exponential rate ``r`` in ``error ~ C exp(-r N)``, fitted by least
    squares over the points with ``window[0] <= error <= window[1]``."""
    n = np.asarray(n_values, dtype=float)
    e = np.asarray(errors, dtype=float)
    mask = (e >= window[0]) & (e <= window[1])
    if mask.sum() < 2:
        raise ValueError("fewer than two points inside the fit window")
    return -np.polyfit(n[mask], np.log(e[mask]), 1)[0]


# --- Laplace demo ----------------------------------------------------------

def laplace_exact(z):
    return np.log(np.abs(3 + 3j - z))


def laplace_demo(n=400, grid=400, geom=None, tol=ssq.DEFAULT_TOL, force=None):
    """Solve the interior Dirichlet problem and evaluate on a grid.

    The grid is uniform over the bounding box of the nodes; only interior
    points are kept. Returns a dict of flat arrays ``x, y, u, u_exact,
    abs_error, method`` plus the solution object.
    """
    geom = starfish() if geom is None else geom
    disc = geom.discretize(n)
    sol = bie.solve_dirichlet(bie.DirichletProblem.from_function(disc, laplace_exact))
    g = disc.gamma
    x = np.linspace(g.real.min(), g.real.max(), grid)
    y = np.linspace(g.imag.min(), g.imag.max(), grid)
    X, Y = np.meshgrid(x, y)
    Z = (X + 1j * Y).ravel()
    Z = Z[~np.isin(Z, g)]
    pres = curve.find_preimages(disc, Z)
    inside = interior_mask(disc, Z, pres, tol)
    Z = Z[inside]
    pres = [p for p, keep in zip(pres, inside) if keep]
    vals, used = ssq.eval_auto_many(disc, sol.sigma, Z, "cauchy", tol, force,
                                    preimages=pres)
    u = vals.imag
    exact = laplace_exact(Z)
    return dict(x=Z.real, y=Z.imag, u=u, u_exact=exact, abs_error=np.abs(u - exact),
                method=np.where(used, ssq.SSQ, ssq.TRAPEZOIDAL), solution=sol,
                disc=disc, near=_near_mask(pres, disc, tol))


def interior_mask(disc, zs, preimages, tol=ssq.DEFAULT_TOL):
    """Side test: the sign of ``Im t*`` inside the SSQ band, where the
    discrete winding number is unreliable, and the winding number elsewhere."""
    inside = curve.is_interior(disc, zs)
    near = _near_mask(preimages, disc, tol)
    im = np.array([p.t_star.imag for p in preimages])
    inside[near] = im[near] > 0
    return inside


def _near_mask(preimages, disc, tol):
    band = ssq.ssq_band(disc, tol)
    return np.array([p.converged and abs(p.t_star.imag) < band for p in preimages],
                    dtype=bool)


# --- coefficient decay -----------------------------------------------------

def decay_data(geom, t_star, n, density="reference"):
    """Coefficient magnitudes of the Cauchy integrand and of the regularized
    integrand at the target ``z = gamma(t*)``.

    ``density`` is ``"reference"`` (``tau^3 + tau`` inside, ``1/tau`` outside) or
    ``"one"``. Returns ``(modes, abs_chat, abs_fhat)``.
    """
    t_star = complex(t_star)
    disc = geom.discretize(n)
    z = geom.fun(t_star)
    side = INTERIOR if t_star.imag > 0 else EXTERIOR
    if density == "one":
        sigma = np.ones(disc.n, dtype=complex)
    elif density == "reference":
        sigma = power_density(side)(disc.gamma)
    else:
        raise ValueError(f"unknown density {density!r}")
    integrand = sigma * disc.dgamma / (disc.gamma - z)
    f = integrand * (np.exp(1j * disc.nodes) - np.exp(1j * t_star))
    k, chat = spectral.decay_profile(spectral.fit_series(integrand))
    _, fhat = spectral.decay_profile(spectral.fit_series(f))
    return k, chat, fhat
