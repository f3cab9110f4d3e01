"""Iterative frame reconstruction.

All solvers start from ``y_0 = 0`` and only touch the frame through
``analyze``/``synthesize`` (``O(N d)`` per iteration).

* ``classical_run``   -- fixed relaxation, ``y += alpha * T*(c - T y)``
* ``greedy_s_run``    -- step minimizing the next S-norm error; needs only
  the measurements, so it also works with noisy data
* ``greedy_std_run``  -- step minimizing the next Euclidean error; needs the
  ground truth
"""
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .frame_core import (
    Frame,
    _vec,
    analyze,
    apply_frame_operator,
    frame_spectrum,
    s_norm,
    synthesize,
)


class Converged(Exception):
    """Residual is at the stagnation tolerance; no step was taken."""


class NumericalError(ArithmeticError):
    """An iterate or step size became non-finite or otherwise invalid."""


@dataclass
class Measurements:
    """Coefficient vector ``c`` with an optional noise budget ``||Tx - c|| <= noise_bound``."""

    coeffs: np.ndarray
    noise_bound: float = np.inf

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if self.coeffs.ndim != 1:
            raise ValueError("coefficients must be a vector")
        if not self.noise_bound >= 0:
            raise ValueError("noise_bound must be nonnegative")


@dataclass(frozen=True)
class StoppingRule:
    max_iters: int = 50
    # None -> 1e-14 * (1 + ||c||), or the analogous data scale
    residual_tol: Optional[float] = None

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.residual_tol is not None and not self.residual_tol >= 0:
            raise ValueError("residual_tol must be nonnegative")

    def tolerance(self, scale: float) -> float:
        if self.residual_tol is not None:
            return self.residual_tol
        return 1e-14 * (1.0 + scale)


@dataclass
class IterationTrace:
    iterates: List[np.ndarray] = field(default_factory=list)
    steps: List[float] = field(default_factory=list)
    err_std: Optional[List[float]] = None
    err_s: Optional[List[float]] = None
    residual_norms: List[float] = field(default_factory=list)
    active_sizes: Optional[List[int]] = None
    converged: bool = False

    @property
    def n_steps(self) -> int:
        return len(self.steps)

    @property
    def final(self) -> np.ndarray:
        return self.iterates[-1]


def _as_measurements(c, frame: Frame) -> Measurements:
    m = c if isinstance(c, Measurements) else Measurements(c)
    _vec(m.coeffs, frame.count, "coefficients")
    return m


def _check_finite(y, alpha, n):
    if not (np.isfinite(alpha) and np.all(np.isfinite(y))):
        raise NumericalError(f"non-finite value at iteration {n} (alpha={alpha})")


class _Recorder:
    """Appends iterates and error norms to a trace."""

    def __init__(self, frame, truth, trace):
        self.frame = frame
        self.trace = trace
        self.truth = None if truth is None else _vec(truth, frame.dim, "truth")
        if self.truth is not None:
            trace.err_std, trace.err_s = [], []

    def record(self, y, residual_norm):
        self.trace.iterates.append(y)
        self.trace.residual_norms.append(residual_norm)
        if self.truth is not None:
            e = self.truth - y
            self.trace.err_std.append(float(np.linalg.norm(e)))
            self.trace.err_s.append(s_norm(self.frame, e))


def classical_run(frame: Frame, c, alpha: float, stop: StoppingRule = StoppingRule(),
                  truth=None) -> IterationTrace:
    """Frame algorithm with fixed relaxation ``alpha``.

    With exact data and ``0 < alpha < 2/B`` the error contracts by at least
    ``contraction_constant(bounds, alpha)`` per step.
    """
    if not alpha > 0:
        raise ValueError(f"relaxation must be positive, got {alpha}")
    m = _as_measurements(c, frame)
    tol = stop.tolerance(float(np.linalg.norm(m.coeffs)))
    trace = IterationTrace()
    rec = _Recorder(frame, truth, trace)

    y = np.zeros(frame.dim)
    r = synthesize(frame, m.coeffs - analyze(frame, y))
    rec.record(y, float(np.linalg.norm(r)))
    for n in range(stop.max_iters):
        if trace.residual_norms[-1] <= tol:
            trace.converged = True
            break
        y = y + alpha * r
        _check_finite(y, alpha, n)
        r = synthesize(frame, m.coeffs - analyze(frame, y))
        _check_finite(r, alpha, n)
        trace.steps.append(float(alpha))
        rec.record(y, float(np.linalg.norm(r)))
    return trace


def greedy_s_step(frame: Frame, c, y, residual_tol: float = 0.0):
    """One greedy step: ``alpha = ||r||^2 / ||r||_S^2`` with ``r = T*(c - T y)``.

    Returns ``(alpha, y_next)``.  Raises Converged when ``||r|| <= residual_tol``.
    """
    c = _vec(c, frame.count, "coefficients")
    y = _vec(y, frame.dim, "y")
    r = synthesize(frame, c - analyze(frame, y))
    rr = float(r @ r)
    if np.sqrt(rr) <= residual_tol or rr == 0.0:
        raise Converged
    Tr = analyze(frame, r)
    alpha = rr / float(Tr @ Tr)
    if not alpha > 0:
        raise NumericalError(f"greedy step size must be positive, got {alpha}")
    y_next = y + alpha * r
    _check_finite(y_next, alpha, -1)
    return alpha, y_next


def greedy_s_run(frame: Frame, c, stop: StoppingRule = StoppingRule(), truth=None) -> IterationTrace:
    """Greedy frame algorithm driven by (possibly noisy) measurements.

    Exact data: ``||x - y_n||_S <= rho**n ||x||_S`` with ``rho = (B-A)/(B+A)``.
    With ``||Tx - c|| <= delta``: ``rho**n (||x||_S + 2 delta) + 2 delta``.
    """
    m = _as_measurements(c, frame)
    tol = stop.tolerance(float(np.linalg.norm(m.coeffs)))
    trace = IterationTrace()
    rec = _Recorder(frame, truth, trace)

    y = np.zeros(frame.dim)
    rec.record(y, float(np.linalg.norm(synthesize(frame, m.coeffs))))
    for _ in range(stop.max_iters):
        try:
            alpha, y = greedy_s_step(frame, m.coeffs, y, tol)
        except Converged:
            trace.converged = True
            break
        trace.steps.append(alpha)
        rec.record(y, float(np.linalg.norm(synthesize(frame, m.coeffs - analyze(frame, y)))))
    return trace


def greedy_std_run(frame: Frame, x, stop: StoppingRule = StoppingRule()) -> IterationTrace:
    """Greedy iteration minimizing the Euclidean error at each step.

    ``alpha_n = ||x - y_n||_S^2 / ||S(x - y_n)||^2``.  The numerator needs
    the true ``x``, so this variant takes the ground truth instead of
    measurements.
    """
    x = _vec(x, frame.dim, "x")
    tol = stop.tolerance(float(np.linalg.norm(apply_frame_operator(frame, x))))
    trace = IterationTrace()
    rec = _Recorder(frame, x, trace)

    y = np.zeros(frame.dim)
    Te = analyze(frame, x)
    r = synthesize(frame, Te)
    rec.record(y, float(np.linalg.norm(r)))
    for n in range(stop.max_iters):
        rr = float(r @ r)
        if np.sqrt(rr) <= tol or rr == 0.0:
            trace.converged = True
            break
        alpha = float(Te @ Te) / rr
        if not alpha > 0:
            raise NumericalError(f"greedy step size must be positive, got {alpha}")
        y = y + alpha * r
        _check_finite(y, alpha, n)
        Te = analyze(frame, x - y)
        r = synthesize(frame, Te)
        trace.steps.append(alpha)
        rec.record(y, float(np.linalg.norm(r)))
    return trace


def neumann_partial(frame: Frame, alpha: float, n: int, x) -> np.ndarray:
    """``F_n S x`` with ``F_n = alpha * sum_{k<n} (I - alpha S)^k``.

    Evaluated by Horner's rule ``v <- alpha*Sx + (I - alpha S) v``; no matrix
    powers are formed.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    b = alpha * apply_frame_operator(frame, _vec(x, frame.dim, "x"))
    v = b.copy()
    for _ in range(n - 1):
        v = b + v - alpha * apply_frame_operator(frame, v)
    return v


def project_onto_range(frame: Frame, c):
    """Least-squares split ``c = T x_tilde + c_tilde`` with ``T* c_tilde = 0``.

    ``x_tilde`` solves ``S x_tilde = T* c`` (Cholesky of the explicit ``S``).
    """
    c = _vec(c, frame.count, "coefficients")
    frame_spectrum(frame)  # raises NotAFrame
    V = frame.vectors
    L = np.linalg.cholesky(V.T @ V)
    z = np.linalg.solve(L, V.T @ c)
    x_tilde = np.linalg.solve(L.T, z)
    return x_tilde, c - analyze(frame, x_tilde)


def remark_identity_check(frame: Frame, c, y):
    """Both sides of ``||x_tilde - y||_S^2 = ||c - T y||^2 - ||c_tilde||^2``."""
    x_tilde, c_tilde = project_onto_range(frame, c)
    lhs = s_norm(frame, x_tilde - y) ** 2
    res = np.asarray(c, dtype=np.float64) - analyze(frame, y)
    rhs = float(res @ res) - float(c_tilde @ c_tilde)
    return lhs, rhs
