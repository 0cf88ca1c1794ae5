"""Exception types raised by periodic_ssq."""


class SSQError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDiscretizationError(SSQError, ValueError):
    """Too few nodes, or sample/density lengths that do not match."""


class EvaluationOutOfRangeError(SSQError, ArithmeticError):
    """Complex argument too far from the real axis for the truncated series."""


class DegenerateCurveError(SSQError, ValueError):
    pass


class OnCurveError(SSQError, ValueError):
    """Target coincides with a quadrature node, or t* is real."""


class InvalidOrderError(SSQError, ValueError):
    pass


class ContractViolationError(SSQError, RuntimeError):
    """SSQ evaluator called with an unconverged preimage."""


class AssemblyError(SSQError, ArithmeticError):
    pass


class SolverError(SSQError, ArithmeticError):
    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition
