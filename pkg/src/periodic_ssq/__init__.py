"""Singularity swap quadrature for layer potentials on closed curves
discretized with the trapezoidal rule."""
from .bie import (DirichletProblem, DlpSolution, assemble_dlp_system,
                  eval_solution, solve_dirichlet)
from .curve import (CurveDiscretization, Preimage, find_preimage, find_preimages,
                    make_circle, make_ellipse, make_starfish, nearest_node)
from .exceptions import (AssemblyError, ContractViolationError,
                         DegenerateCurveError, EvaluationOutOfRangeError,
                         InvalidDiscretizationError, InvalidOrderError,
                         OnCurveError, SolverError, SSQError)
from .spectral import (FourierSeries, decay_profile, differentiate, eval_series,
                       fit_series)
from .ssq import (EvalReport, SsqWeights, eval_auto, eval_cauchy_ssq,
                  eval_cauchy_trapz, eval_log_ssq, eval_log_trapz,
                  eval_power_ssq, pk_cauchy, pk_power, qk_log)

__version__ = "0.1.0"
