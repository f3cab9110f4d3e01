"""Reconstruction from clipped frame coefficients.

Coefficients are clipped to ``[-lam, lam]``.  Each iteration uses only the
indices that are either unsaturated, or saturated while the current iterate
still sits on the wrong side of the clipping level.  Both sets are decided
from the clipped data alone: an entry strictly inside ``(-lam, lam)`` is
exact, an entry equal to ``+-lam`` only says the true coefficient is at or
beyond that level.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .algorithms import IterationTrace, NumericalError, StoppingRule, _Recorder
from .frame_core import Frame, _vec, analyze


class StalledActiveSet(RuntimeError):
    """No index is active, so the iteration cannot move."""


def clip(t, lam: float):
    """Clip to ``[-lam, lam]``; works elementwise on arrays."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    out = np.clip(t, -lam, lam)
    return float(out) if np.ndim(out) == 0 else out


@dataclass
class SaturatedMeasurements:
    coeffs: np.ndarray
    lam: float

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if not self.lam > 0:
            raise ValueError("lambda must be positive")
        if np.any(np.abs(self.coeffs) > self.lam):
            raise ValueError("saturated coefficients exceed lambda")

    @property
    def unsaturated(self) -> np.ndarray:
        return np.abs(self.coeffs) < self.lam

    @property
    def n_saturated(self) -> int:
        return int(np.count_nonzero(~self.unsaturated))


@dataclass(frozen=True)
class ActiveIndexSet:
    indices: Tuple[int, ...]
    # indices in the unsaturated set / in the sign-mismatch set
    unsaturated: Tuple[int, ...]
    mismatched: Tuple[int, ...]

    def __len__(self):
        return len(self.indices)


def saturate(frame: Frame, x, lam: float) -> SaturatedMeasurements:
    return SaturatedMeasurements(clip(analyze(frame, x), lam), lam)


def _active_mask(sat: SaturatedMeasurements, cy):
    s, lam = sat.coeffs, sat.lam
    inside = np.abs(s) < lam
    low = (s <= -lam) & (cy > -lam)
    high = (s >= lam) & (cy < lam)
    return inside, low | high


def active_index_set(sat: SaturatedMeasurements, frame: Frame, y) -> ActiveIndexSet:
    """Unsaturated indices plus saturated indices the iterate has not reached."""
    _vec(sat.coeffs, frame.count, "saturated coefficients")
    inside, mismatch = _active_mask(sat, analyze(frame, y))
    idx = np.flatnonzero(inside | mismatch)
    return ActiveIndexSet(
        tuple(idx.tolist()),
        tuple(np.flatnonzero(inside).tolist()),
        tuple(np.flatnonzero(mismatch).tolist()),
    )


def saturated_run(frame: Frame, sat: SaturatedMeasurements, mode="greedy", relaxation: float = 1.0,
                  stop: StoppingRule = StoppingRule(), truth=None) -> IterationTrace:
    """Saturated frame algorithm.

    ``mode="fixed"`` uses the constant ``relaxation`` (``2/(A+B)`` for the
    full frame); ``mode="greedy"`` picks ``alpha_k = ||r||^2 / ||r||_{S_k}^2``
    where ``S_k`` is the frame operator of the active vectors at step ``k``.
    The trace records the active-set size used for each step.
    """
    if mode not in ("fixed", "greedy"):
        raise ValueError(f"mode must be 'fixed' or 'greedy', got {mode!r}")
    if mode == "fixed" and not relaxation > 0:
        raise ValueError("relaxation must be positive")
    s = _vec(sat.coeffs, frame.count, "saturated coefficients")
    V = frame.vectors
    tol = stop.tolerance(float(np.linalg.norm(s)))

    trace = IterationTrace(active_sizes=[])
    rec = _Recorder(frame, truth, trace)
    y = np.zeros(frame.dim)
    for k in range(stop.max_iters + 1):
        cy = V @ y
        inside, mismatch = _active_mask(sat, cy)
        act = np.flatnonzero(inside | mismatch)
        Va = V[act]
        r = Va.T @ (s[act] - cy[act])
        rr = float(r @ r)
        rnorm = float(np.sqrt(rr))
        rec.record(y, rnorm)
        if k == stop.max_iters:
            break
        if act.size == 0:
            raise StalledActiveSet(f"active index set is empty at iteration {k}")
        if rnorm <= tol:
            trace.converged = True
            break
        if mode == "fixed":
            alpha = relaxation
        else:
            Tr = Va @ r
            alpha = rr / float(Tr @ Tr)
        y = y + alpha * r
        if not (np.isfinite(alpha) and np.all(np.isfinite(y))):
            raise NumericalError(f"non-finite value at iteration {k}")
        trace.steps.append(float(alpha))
        trace.active_sizes.append(int(act.size))
    return trace
