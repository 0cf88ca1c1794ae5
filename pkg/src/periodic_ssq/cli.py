"""Command-line driver for the experiments.

    periodic-ssq demo-laplace [--n 400] [--grid 400] [--force-trapz]
    periodic-ssq converge --kernel cauchy --side both --n 50:50:600
    periodic-ssq decay --t-star 1+0.05i --n 401
    periodic-ssq eval --geometry circle --z 0.5

Exit status is 0 on success, 2 for an invalid configuration and 3 for a
numerical failure.
"""
import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import experiments, ssq
from .exceptions import (DegenerateCurveError, InvalidDiscretizationError,
                         InvalidOrderError, OnCurveError, SSQError)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3

KERNELS = ("log", "cauchy", "power2", "power3")
SIDES = ("interior", "exterior", "both")
DENSITIES = ("one", "cubic", "inverse", "product")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    geometry: str = "starfish"
    geometry_params: dict = field(default_factory=dict)
    n: list = field(default_factory=lambda: [400])
    kernel: str = "cauchy"
    side: str = "both"
    d_list: list = field(default_factory=lambda: list(experiments.DEFAULT_D))
    tol: float = ssq.DEFAULT_TOL
    seed: int = None
    out: str = None
    format: str = "csv"

    def validate(self):
        if any(n < 3 for n in self.n):
            raise ConfigError("node counts must be at least 3")
        if any(d <= 0 for d in self.d_list):
            raise ConfigError("d values must be positive")
        if self.kernel not in KERNELS:
            raise ConfigError(f"kernel must be one of {KERNELS}")
        if self.side not in SIDES:
            raise ConfigError(f"side must be one of {SIDES}")
        if not 0 < self.tol < 1:
            raise ConfigError("tol must lie in (0, 1)")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        return self

    @property
    def sides(self):
        return ["interior", "exterior"] if self.side == "both" else [self.side]

    def make_geometry(self):
        return experiments.make_geometry(self.geometry, **self.geometry_params)


def parse_range(text):
    """``"400"`` or ``"start:step:stop"`` (stop inclusive) to a list of ints."""
    try:
        parts = [int(p) for p in text.split(":")]
    except ValueError:
        raise ConfigError(f"bad node range {text!r}") from None
    if len(parts) == 1:
        return parts
    if len(parts) != 3 or parts[1] <= 0:
        raise ConfigError(f"bad node range {text!r}, expected start:step:stop")
    start, step, stop = parts
    return list(range(start, stop + 1, step))


def parse_complex(text):
    """Parse ``1+0.05i`` or ``1+0.05j`` style complex numbers."""
    try:
        return complex(text.strip().replace(" ", "").replace("i", "j"))
    except ValueError:
        raise ConfigError(f"cannot parse complex number {text!r}") from None


def parse_floats(text):
    try:
        return [abs(float(v)) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"bad list of numbers {text!r}") from None


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_rows(rows, columns, out, fmt):
    """Write dict rows as CSV (one header line, 17 significant digits) or JSON."""
    if fmt == "json":
        text = json.dumps([{c: _jsonable(r[c]) for c in columns} for r in rows],
                          indent=1) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r[c]) for c in columns])
        text = buf.getvalue()
    _emit(text, out)


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": float(v.real), "im": float(v.imag)}
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {out}: {exc.strerror}") from exc


def _log(msg):
    print(msg, file=sys.stderr)


# --- subcommands --------------------------------------------------------------

def cmd_demo_laplace(cfg, grid=400, force=None):
    geom = cfg.make_geometry()
    res = experiments.laplace_demo(cfg.n[0], grid, geom, cfg.tol, force)
    columns = ["x", "y", "u", "u_exact", "abs_error", "method"]
    rows = [dict(zip(columns, vals)) for vals in zip(
        res["x"], res["y"], res["u"], res["u_exact"], res["abs_error"], res["method"])]
    write_rows(rows, columns, cfg.out, cfg.format)
    err, near = res["abs_error"], res["near"]
    for method in (ssq.SSQ, ssq.TRAPEZOIDAL):
        sel = res["method"] == method
        if sel.any():
            _log(f"{method}: {sel.sum()} points, max error {err[sel].max():.3e}")
    if near.any():
        _log(f"near-boundary band: {near.sum()} points, max error {err[near].max():.3e}")
    return res


def cmd_converge(cfg):
    geom = cfg.make_geometry()
    rows = experiments.convergence_table(geom, cfg.kernel, cfg.sides, cfg.n,
                                         cfg.d_list, jitter_seed=cfg.seed)
    columns = ["kernel", "side", "d", "N", "err_trapz", "err_ssq", "flags"]
    write_rows(rows, columns, cfg.out, cfg.format)
    return rows


def cmd_decay(cfg, t_star, density="reference"):
    geom = cfg.make_geometry()
    k, chat, fhat = experiments.decay_data(geom, t_star, cfg.n[0], density)
    rows = [dict(k=int(a), abs_chat=b, abs_fhat=c) for a, b, c in zip(k, chat, fhat)]
    write_rows(rows, ["k", "abs_chat", "abs_fhat"], cfg.out, cfg.format)
    return rows


def _density(name, disc):
    if name == "one":
        return np.ones(disc.n)
    if name == "cubic":
        return disc.gamma**3 + disc.gamma
    if name == "inverse":
        return 1 / disc.gamma
    if name == "product":
        return disc.gamma.real * disc.gamma.imag
    raise ConfigError(f"density must be one of {DENSITIES}")


def cmd_eval(cfg, z, density="one", force=None):
    disc = cfg.make_geometry().discretize(cfg.n[0])
    sigma = _density(density, disc)
    if cfg.kernel == "log" and np.iscomplexobj(sigma):
        raise ConfigError("log kernel needs a real density (one or product)")
    rep = ssq.eval_auto(disc, sigma, z, cfg.kernel, cfg.tol, force)
    record = dict(
        z={"re": z.real, "im": z.imag},
        kernel=cfg.kernel,
        value=_jsonable(complex(rep.value)) if cfg.kernel != "log" else float(rep.value),
        method=rep.method,
        im_tstar=rep.im_tstar,
        preimage_converged=rep.preimage_converged,
        iterations=rep.iterations,
        residual=rep.residual if np.isfinite(rep.residual) else None,
    )
    _emit(json.dumps(record, indent=1) + "\n", cfg.out)
    return record


# --- argument parsing -----------------------------------------------------------

def _common(p, n_default="400"):
    p.add_argument("--geometry", default="starfish", choices=("starfish", "circle", "ellipse"))
    p.add_argument("--arms", type=int, default=5, help="starfish arm count")
    p.add_argument("--amplitude", type=float, default=0.3, help="starfish amplitude")
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--a", type=float, default=2.0, help="ellipse semi-axis along x")
    p.add_argument("--b", type=float, default=1.0, help="ellipse semi-axis along y")
    p.add_argument("--n", default=n_default, help="node count, or start:step:stop")
    p.add_argument("--tol", type=float, default=ssq.DEFAULT_TOL)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", default="csv", choices=("csv", "json"))


def _force_flags(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--force-trapz", action="store_true")
    g.add_argument("--force-ssq", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="periodic-ssq",
        description="Near-singular layer potentials on trapezoidal curves.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("demo-laplace", help="interior Laplace Dirichlet demo")
    _common(p)
    p.add_argument("--grid", type=int, default=400)
    _force_flags(p)

    p = sub.add_parser("converge", help="error vs N for targets at Im t* = +-d")
    _common(p, n_default="50:50:600")
    p.add_argument("--kernel", default="cauchy", choices=KERNELS)
    p.add_argument("--side", default="both", choices=SIDES)
    p.add_argument("--d", default="0.01,0.02,0.04", help="comma-separated |Im t*|")

    p = sub.add_parser("decay", help="Fourier coefficient decay at a target")
    _common(p, n_default="401")
    p.add_argument("--t-star", required=True)
    p.add_argument("--density", default="reference", choices=("reference", "one"))

    p = sub.add_parser("eval", help="evaluate one layer potential")
    _common(p)
    p.add_argument("--z", required=True)
    p.add_argument("--kernel", default="cauchy", choices=KERNELS)
    p.add_argument("--density", default="one", choices=DENSITIES)
    _force_flags(p)
    return parser


def _config(args):
    params = {"starfish": dict(n_arms=args.arms, amplitude=args.amplitude),
              "circle": dict(radius=args.radius),
              "ellipse": dict(a=args.a, b=args.b)}[args.geometry]
    cfg = RunConfig(geometry=args.geometry, geometry_params=params,
                    n=parse_range(args.n), tol=args.tol, seed=args.seed,
                    out=args.out, format=args.format)
    if hasattr(args, "kernel"):
        cfg.kernel = args.kernel
    if hasattr(args, "side"):
        cfg.side = args.side
    if getattr(args, "d", None):
        cfg.d_list = parse_floats(args.d)
    return cfg.validate()


def _force(args):
    if getattr(args, "force_trapz", False):
        return ssq.TRAPEZOIDAL
    if getattr(args, "force_ssq", False):
        return ssq.SSQ
    return None


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        if args.command == "demo-laplace":
            cmd_demo_laplace(cfg, args.grid, _force(args))
        elif args.command == "converge":
            cmd_converge(cfg)
        elif args.command == "decay":
            cmd_decay(cfg, parse_complex(args.t_star), args.density)
        elif args.command == "eval":
            cmd_eval(cfg, parse_complex(args.z), args.density, _force(args))
    except (ConfigError, OnCurveError, InvalidDiscretizationError,
            InvalidOrderError, DegenerateCurveError) as exc:
        _log(f"error: {exc}")
        return EXIT_CONFIG
    except SSQError as exc:
        _log(f"numerical failure: {exc}")
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        _log(f"error: {exc}")
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
