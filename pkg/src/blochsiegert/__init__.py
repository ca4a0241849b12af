"""Bloch-Siegert shift of the Rabi model.

Closed-form extrapolated approximations (:mod:`.approx`), their exact
derivation from the perturbation series (:mod:`.series`) and a Floquet
solver for the numerically exact resonance (:mod:`.floquet`).
"""
__version__ = "0.1.0"

from .approx import (  # noqa: E402
    Method,
    RabiParams,
    ShiftReport,
    asymptotic_shift,
    bessel_j0_first_zero,
    extrapolated_shift,
    pt_shift,
    rwa_shift,
)
from .errors import (  # noqa: E402
    BlochSiegertError,
    BracketError,
    EigenConvergenceError,
    FloquetConvergenceError,
    StepSizeError,
)
from .floquet import FloquetConfig, direct_evolution_prob, find_resonance, time_avg_transition_prob  # noqa: E402
from .kernels import BACKEND  # noqa: E402
from .series import asymptotic_divisor, derive_formula, pt_series, series_pow  # noqa: E402
