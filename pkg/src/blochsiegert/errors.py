"""Exception types raised by the numerical routines."""


class BlochSiegertError(Exception):
    """Base class for all package errors."""


class EigenConvergenceError(BlochSiegertError, ArithmeticError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class StepSizeError(BlochSiegertError, ArithmeticError):
    """Time propagation could not reach the requested accuracy."""


class BracketError(BlochSiegertError):
    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class FloquetConvergenceError(BlochSiegertError):
    """Resonance position did not converge in the photon-number truncation."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
