"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class CpmFrobError(Exception):
    """Base class for every error raised by this package."""


class SizeLimit(CpmFrobError):
    pass


class DimMismatch(CpmFrobError, ValueError):
    pass


class NotHermitian(CpmFrobError, ValueError):
    pass


class NoConvergence(CpmFrobError):
    pass


class NotCP(CpmFrobError, ValueError):
    pass


class NotPure(CpmFrobError):
    pass


class NotFactorizable(CpmFrobError):
    pass


class NotProjectiveAlgebra(CpmFrobError):
    def __init__(self, law: str, residual: float):
        super().__init__(f"law {law!r} fails even up to phase (residual {residual:.3e})")
        self.law = law
        self.residual = residual


class NotFrobenius(CpmFrobError):
    def __init__(self, message: str, residuals: dict | None = None):
        super().__init__(message)
        self.residuals = residuals or {}


class NotIsometry(CpmFrobError):
    def __init__(self, message: str, choi_distance: float):
        super().__init__(message)
        self.choi_distance = choi_distance


class NumericalDegeneracy(CpmFrobError):
    pass


class HypothesesFailed(CpmFrobError):
    def __init__(self, report, failing: list[str], tol: float):
        names = ", ".join(f"{k}={report.residuals[k]:.3e}" for k in failing)
        super().__init__(f"hypotheses fail at tol={tol:.1e}: {names}")
        self.report = report
        self.failing = failing
        self.tol = tol


class TheoremViolationDiagnostic(CpmFrobError):
    """Comultiplication decomposed into n >= 2 pure isometries at positive dimension."""

    def __init__(self, n: int, coeffs):
        super().__init__(
            f"comultiplication has {n} pure components (coefficients {list(coeffs)}); "
            "input is not within tolerance of an ophidian isometric comonoid"
        )
        self.n = n
        self.coeffs = list(coeffs)


class CounitNotPure(CpmFrobError):
    def __init__(self, residual: float):
        super().__init__(f"counit is not pure (rank-1 residual {residual:.3e})")
        self.residual = residual


class ParseError(CpmFrobError, ValueError):
    pass
