"""Numerically exact Bloch-Siegert shift from Floquet theory.

The time-periodic Rabi Hamiltonian is mapped to a time-independent matrix on
(spin) x (photon index) space.  Basis state ``(s, k)`` sits at row
``2 * (k + n_photon) + s`` with ``s = 0`` for spin down (energy ``-omega0/2``)
and ``s = 1`` for spin up.  The resonance is the drive frequency maximizing
the long-time average of the down -> up transition probability.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .approx import Method, RabiParams, ShiftReport, extrapolated_shift, regime
from .errors import BracketError, EigenConvergenceError, FloquetConvergenceError, StepSizeError

__all__ = [
    "FloquetConfig",
    "FloquetSpectrum",
    "build_floquet_matrix",
    "quasienergy_spectrum",
    "time_avg_transition_prob",
    "direct_evolution_prob",
    "golden_section_max",
    "find_resonance",
    "resonance_at_truncation",
    "initial_n_photon",
]

DOWN, UP = 0, 1
MAX_DIM = 2000
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class FloquetConfig:
    """Truncation and search settings for :func:`find_resonance`.

    ``n_photon=None`` picks ``ceil(A / omega_guess) + 10`` per call.
    ``omega_tol`` is relative to ``omega0``.  ``solver`` chooses the
    eigensolver: ``"jacobi"`` (the kernel), ``"lapack"`` (numpy) or
    ``"auto"``, which uses Jacobi only when the compiled kernels are present.
    """

    n_photon: int | None = None
    omega_tol: float = 1e-6
    truncation_rtol: float = 1e-5
    max_n_photon: int = 200
    bracket_width: float = 0.1
    photon_step: int = 5
    solver: str = "auto"

    def __post_init__(self):
        if self.n_photon is not None and self.n_photon < 1:
            raise ValueError("n_photon must be >= 1")
        if self.max_n_photon < 1 or (self.n_photon is not None and self.max_n_photon < self.n_photon):
            raise ValueError("max_n_photon must be >= n_photon")
        for name in ("omega_tol", "truncation_rtol", "bracket_width"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.solver not in ("auto", "jacobi", "lapack"):
            raise ValueError(f"unknown solver {self.solver!r}")

    def to_dict(self) -> dict:
        return {
            "n_photon": self.n_photon,
            "omega_tol": self.omega_tol,
            "truncation_rtol": self.truncation_rtol,
            "max_n_photon": self.max_n_photon,
            "bracket_width": self.bracket_width,
            "solver": self.resolved_solver,
        }

    @property
    def resolved_solver(self) -> str:
        if self.solver == "auto":
            return "jacobi" if kernels.HAVE_COMPILED else "lapack"
        return self.solver


@dataclass(frozen=True)
class FloquetSpectrum:
    quasienergies: np.ndarray
    eigenvectors: np.ndarray  # columns, matching quasienergies
    n_photon: int
    residual: float = 0.0

    @property
    def dim(self) -> int:
        return self.quasienergies.shape[0]

    def index(self, spin: int, k: int) -> int:
        return basis_index(spin, k, self.n_photon)


def basis_index(spin: int, k: int, n_photon: int) -> int:
    if abs(k) > n_photon:
        raise IndexError(f"photon index {k} outside window +-{n_photon}")
    return 2 * (k + n_photon) + spin


def initial_n_photon(p: RabiParams, omega: float) -> int:
    return math.ceil(p.amplitude / omega) + 10


def build_floquet_matrix(p: RabiParams, omega: float, n_photon: int, max_dim: int = MAX_DIM) -> np.ndarray:
    """Real symmetric Floquet matrix truncated to photon indices ``-n_photon..n_photon``."""
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    if n_photon < 1:
        raise ValueError(f"n_photon must be >= 1, got {n_photon}")
    dim = 2 * (2 * n_photon + 1)
    if dim > max_dim:
        raise ValueError(f"Floquet matrix dimension {dim} exceeds cap {max_dim}")
    m = np.zeros((dim, dim))
    k = np.arange(-n_photon, n_photon + 1)
    idx = 2 * (k + n_photon)
    m[idx, idx] = -0.5 * p.omega0 + k * omega
    m[idx + 1, idx + 1] = 0.5 * p.omega0 + k * omega
    # cos(wt) sigma_x couples (down, k) <-> (up, k +- 1) with weight A/4
    c = 0.25 * p.amplitude
    lo, hi = idx[:-1], idx[1:]
    m[lo, hi + 1] = c
    m[hi + 1, lo] = c
    m[lo + 1, hi] = c
    m[hi, lo + 1] = c
    return m


def quasienergy_spectrum(m: np.ndarray, solver: str = "auto", n_photon: int | None = None,
                         max_sweeps: int = 100) -> FloquetSpectrum:
    """Full symmetric eigendecomposition, eigenvalues ascending.

    Raises:
        EigenConvergenceError: Jacobi did not converge within ``max_sweeps``.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.array_equal(m, m.T):
        raise ValueError("matrix is not symmetric")
    if n_photon is None:
        n_photon = (m.shape[0] // 2 - 1) // 2
    if solver == "auto":
        solver = "jacobi" if kernels.HAVE_COMPILED else "lapack"
    if solver == "lapack":
        w, v = np.linalg.eigh(m)
        return FloquetSpectrum(w, v, n_photon)
    if solver != "jacobi":
        raise ValueError(f"unknown solver {solver!r}")
    scale = float(np.linalg.norm(m))
    w, v, _sweeps, off = kernels.jacobi_eigh(m, 1e-13, max_sweeps)
    if off > 1e-12 * max(scale, np.finfo(float).tiny):
        raise EigenConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps", off)
    order = np.argsort(w, kind="stable")
    return FloquetSpectrum(w[order], v[:, order], n_photon, residual=off)


def _shirley_average(spec: FloquetSpectrum, initial: int, final: int) -> float:
    v2 = spec.eigenvectors ** 2
    start = v2[spec.index(initial, 0)]
    return float(np.sum(v2[final::2, :] @ start))


def _fixed_phase_average(spec: FloquetSpectrum, initial: int, final: int, phase: float) -> float:
    # Each physical Floquet state appears once per photon shift; summing
    # <i,0|g> * sum_k <i,k|g> e^{ik phase} over all replicas rebuilds the
    # coherent initial overlap without picking a Brillouin zone.
    v = spec.eigenvectors
    k = np.arange(-spec.n_photon, spec.n_photon + 1)
    coherent = np.exp(1j * k * phase) @ v[initial::2, :]
    weights = np.sum(v[final::2, :] ** 2, axis=0)
    return float(np.real(np.sum(weights * v[spec.index(initial, 0)] * coherent)))


def time_avg_transition_prob(p: RabiParams, omega: float, cfg: FloquetConfig | None = None,
                             final: int = UP, phase: float | None = None) -> float:
    """Long-time averaged probability of ending in ``final`` after starting spin down.

    With ``phase=None`` (the resonance observable) the average also runs over
    the initial drive phase, giving the sum over all eigenvectors ``g`` and
    photon indices ``k`` of ``|<final, k|g>|^2 |<g|down, 0>|^2``.  A float
    ``phase`` fixes the drive to ``cos(omega t + phase)`` instead.
    """
    cfg = cfg or FloquetConfig()
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    n = cfg.n_photon if cfg.n_photon is not None else initial_n_photon(p, omega)
    spec = quasienergy_spectrum(build_floquet_matrix(p, omega, n), cfg.resolved_solver, n)
    if phase is None:
        return _shirley_average(spec, DOWN, final)
    return _fixed_phase_average(spec, DOWN, final, phase)


def _propagate_converged(k, p: RabiParams, omega: float, n_periods: int, steps: int,
                         tol: float, max_steps: int, phase: float):
    coarse, _ = k.rk4_average(p.omega0, p.amplitude, omega, n_periods, steps, phase)
    while True:
        if 2 * steps > max_steps:
            raise StepSizeError(
                f"averaged probability not converged to {tol} at {steps} steps per period"
            )
        fine, norm2 = k.rk4_average(p.omega0, p.amplitude, omega, n_periods, 2 * steps, phase)
        steps *= 2
        if abs(fine - coarse) < tol:
            break
        coarse = fine
    drift = abs(norm2 - 1.0)
    if drift > 1e-6:
        raise StepSizeError(f"norm drift {drift:.3e} exceeds 1e-6 at {steps} steps per period")
    return fine, steps, drift


def direct_evolution_prob(p: RabiParams, omega: float, n_periods: int = 500,
                          steps_per_period: int = 256, *, phase: float | None = None,
                          n_phases: int = 16, tol: float = 1e-6,
                          max_steps_per_period: int = 1 << 15, backend: str | None = None,
                          return_info: bool = False):
    """Time-averaged ``P_up`` from RK4 propagation of the Schroedinger equation.

    Starts in spin down under the drive ``cos(omega t + phase)``.  With
    ``phase=None`` the result is also averaged over ``n_phases`` equally
    spaced drive phases, which is the observable :func:`time_avg_transition_prob`
    returns by default.  Each run halves the step until the average moves by
    less than ``tol`` and keeps the finer result.

    Raises:
        StepSizeError: no convergence below ``max_steps_per_period`` or the
            norm drifted by more than 1e-6.
    """
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    if n_periods < 100:
        raise ValueError("n_periods must be >= 100")
    if steps_per_period < 4:
        raise ValueError("steps_per_period must be >= 4")
    k = kernels.get_backend(backend)
    phases = [phase] if phase is not None else [2 * math.pi * j / n_phases for j in range(n_phases)]
    probs, steps_used, drift = [], 0, 0.0
    for ph in phases:
        prob, steps, d = _propagate_converged(
            k, p, omega, n_periods, int(steps_per_period), tol, max_steps_per_period, ph
        )
        probs.append(prob)
        steps_used = max(steps_used, steps)
        drift = max(drift, d)
    value = math.fsum(probs) / len(probs)
    if return_info:
        return value, {"steps_per_period": steps_used, "norm_drift": drift, "n_phases": len(phases)}
    return value


def golden_section_max(f, lo: float, hi: float, tol: float, max_iter: int = 200):
    """Maximize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x), n_evals)``."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
        evals += 1
    return (c, fc, evals) if fc >= fd else (d, fd, evals)


def _search_peak(p: RabiParams, n_photon: int, lo: float, hi: float, cfg: FloquetConfig):
    solver = cfg.resolved_solver

    def prob(w: float) -> float:
        spec = quasienergy_spectrum(build_floquet_matrix(p, w, n_photon), solver, n_photon)
        return _shirley_average(spec, DOWN, UP)

    tol = cfg.omega_tol * p.omega0
    w, peak, evals = golden_section_max(prob, lo, hi, tol)
    p_lo, p_hi = prob(lo), prob(hi)
    evals += 2
    interior = (w - lo > 2 * tol and hi - w > 2 * tol and peak >= p_lo and peak >= p_hi)
    return w, peak, evals, interior


def resonance_at_truncation(p: RabiParams, n_photon: int, cfg: FloquetConfig | None = None,
                            bracket: tuple[float, float] | None = None) -> tuple[float, float]:
    """Peak frequency and peak probability for one fixed photon truncation."""
    cfg = cfg or FloquetConfig()
    if bracket is None:
        center = p.omega0 + extrapolated_shift(p, 8).shift
        bracket = (center * (1 - cfg.bracket_width), center * (1 + cfg.bracket_width))
    w, peak, _evals, interior = _search_peak(p, n_photon, bracket[0], bracket[1], cfg)
    if not interior:
        raise BracketError("no interior maximum in bracket", {"bracket": list(bracket), "omega": w})
    return w, peak


def find_resonance(p: RabiParams, cfg: FloquetConfig | None = None) -> ShiftReport:
    """Resonance frequency maximizing the averaged transition probability.

    The golden-section search runs on ``center * (1 +- bracket_width)`` with
    the centre from the order-8 extrapolation formula, and is repeated with
    ``photon_step`` more photons until the result moves by less than
    ``truncation_rtol`` (relative).

    Raises:
        BracketError: no interior maximum even after widening the bracket once.
        FloquetConvergenceError: truncation not converged by ``max_n_photon``.
    """
    cfg = cfg or FloquetConfig()
    if p.amplitude == 0:
        return ShiftReport(
            Method.FLOQUET, p, 0.0,
            {"n_photon_final": 0, "peak_prob": 0.0, "bracket": [p.omega0, p.omega0], "evals": 0,
             "regime": regime(0.0)},
        )
    center = p.omega0 + extrapolated_shift(p, 8).shift
    n = cfg.n_photon if cfg.n_photon is not None else initial_n_photon(p, center)
    total_evals = 0
    previous = None
    history = []
    while True:
        if n > cfg.max_n_photon:
            raise FloquetConvergenceError(
                f"resonance not converged within max_n_photon={cfg.max_n_photon}",
                {"history": history, "evals": total_evals},
            )
        width = cfg.bracket_width
        for attempt in range(2):
            lo = max(center * (1 - width), 1e-12 * p.omega0)
            hi = center * (1 + width)
            w, peak, evals, interior = _search_peak(p, n, lo, hi, cfg)
            total_evals += evals
            if interior:
                break
            width *= 2
        else:
            raise BracketError(
                "transition probability has no interior maximum in the search bracket",
                {"bracket": [lo, hi], "omega": w, "peak_prob": peak, "n_photon": n,
                 "evals": total_evals},
            )
        history.append((n, w))
        if previous is not None and abs(w - previous) <= cfg.truncation_rtol * abs(w):
            break
        previous = w
        n += cfg.photon_step
    return ShiftReport(
        Method.FLOQUET,
        p,
        w - p.omega0,
        {
            "n_photon_final": n,
            "peak_prob": peak,
            "bracket": [lo, hi],
            "evals": total_evals,
            "regime": regime(p.ratio),
        },
    )
