"""Finite-dimensional real frames and their operators.

A frame is stored as an ``N x d`` matrix whose rows are the frame vectors.
The analysis operator ``T`` maps ``x`` to its coefficients against the rows,
the synthesis operator ``T*`` is its transpose, and ``S = T*T`` is the frame
operator.  Solvers only ever need the action of ``S``, so it is applied
matrix-free through two products with the frame matrix; the explicit
``d x d`` matrix is available for spectral computations.
"""
from dataclasses import dataclass
from typing import Sequence

import numpy as np

# Smallest eigenvalue of S below this fraction of the largest means the
# vectors do not span.
PD_RTOL = 1e-10


class NotAFrame(ValueError):
    """The collection of vectors does not span the ambient space."""


class Frame:
    """Ordered collection of ``count`` frame vectors in ``R^dim``.

    The matrix is copied and made read-only, so a ``Frame`` can be shared
    between concurrent runs.
    """

    def __init__(self, vectors, dim=None):
        vecs = np.array(vectors, dtype=np.float64)
        if vecs.ndim == 1 and vecs.size == 0 and dim is not None:
            vecs = vecs.reshape(0, dim)
        if vecs.ndim != 2:
            raise ValueError(f"frame vectors must form a 2-D array, got shape {vecs.shape}")
        if vecs.shape[1] < 1:
            raise ValueError("frame dimension must be at least 1")
        if not np.all(np.isfinite(vecs)):
            raise ValueError("frame vectors contain non-finite entries")
        vecs.setflags(write=False)
        self._vectors = vecs

    @property
    def vectors(self) -> np.ndarray:
        return self._vectors

    @property
    def count(self) -> int:
        return self._vectors.shape[0]

    @property
    def dim(self) -> int:
        return self._vectors.shape[1]

    def subframe(self, indices) -> "Frame":
        """Frame made of the vectors at ``indices`` (in the given order)."""
        return Frame(self._vectors[np.asarray(indices, dtype=np.intp)], dim=self.dim)

    def __repr__(self):
        return f"Frame(count={self.count}, dim={self.dim})"


@dataclass(frozen=True)
class FrameBounds:
    lower: float
    upper: float

    def __post_init__(self):
        if not (0 < self.lower <= self.upper < np.inf):
            raise ValueError(f"invalid frame bounds A={self.lower}, B={self.upper}")


@dataclass(frozen=True)
class OperatorPolynomial:
    """``p(S) = sum_k coeffs[k] * S**k``."""

    coeffs: Sequence[float]

    def __post_init__(self):
        c = tuple(float(v) for v in self.coeffs)
        if not c:
            raise ValueError("polynomial needs at least one coefficient")
        if not all(np.isfinite(c)):
            raise ValueError("polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    def __call__(self, t):
        # Horner
        out = np.zeros_like(np.asarray(t, dtype=np.float64))
        for a in reversed(self.coeffs):
            out = out * t + a
        return out


def _vec(v, n, what):
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (n,):
        raise ValueError(f"{what} must have shape ({n},), got {v.shape}")
    return v


def analyze(frame: Frame, x) -> np.ndarray:
    """Frame coefficients ``<x, x_j>`` for every frame vector."""
    return frame.vectors @ _vec(x, frame.dim, "x")


def synthesize(frame: Frame, c) -> np.ndarray:
    """``sum_j c_j x_j``."""
    return frame.vectors.T @ _vec(c, frame.count, "coefficients")


def apply_frame_operator(frame: Frame, x) -> np.ndarray:
    return synthesize(frame, analyze(frame, x))


def frame_operator_matrix(frame: Frame) -> np.ndarray:
    """Explicit symmetric ``d x d`` matrix of ``S``."""
    V = frame.vectors
    S = V.T @ V
    return 0.5 * (S + S.T)


def s_inner(frame: Frame, x, y) -> float:
    """``<Sx, y>``, evaluated as ``<Tx, Ty>`` in coefficient space."""
    return float(analyze(frame, x) @ analyze(frame, y))


def s_norm(frame: Frame, x) -> float:
    c = analyze(frame, x)
    return float(np.sqrt(c @ c))


def frame_spectrum(frame: Frame):
    """Eigenvalues (ascending) and eigenvectors of ``S``.

    Raises NotAFrame when ``S`` is not positive definite.
    """
    if frame.count == 0:
        raise NotAFrame("empty frame cannot span")
    lam, U = np.linalg.eigh(frame_operator_matrix(frame))
    if lam[-1] <= 0 or lam[0] <= PD_RTOL * lam[-1]:
        raise NotAFrame(
            f"frame operator is not positive definite "
            f"(smallest eigenvalue {lam[0]:.3e}, largest {lam[-1]:.3e})"
        )
    return lam, U


def optimal_frame_bounds(frame: Frame) -> FrameBounds:
    lam, _ = frame_spectrum(frame)
    return FrameBounds(float(lam[0]), float(lam[-1]))


def contraction_constant(bounds: FrameBounds, alpha: float) -> float:
    """Per-step error factor ``max(|1 - alpha A|, |1 - alpha B|)``."""
    return max(abs(1.0 - alpha * bounds.lower), abs(1.0 - alpha * bounds.upper))


def optimal_relaxation(bounds: FrameBounds) -> float:
    return 2.0 / (bounds.lower + bounds.upper)


def polynomial_operator_norms(frame: Frame, p: OperatorPolynomial):
    """Operator norm of ``p(S)`` in the standard norm and in the S-norm.

    The standard norm is the spectral radius ``max |p(lambda_k)|``.  The
    S-norm is computed separately as the 2-norm of ``S^(1/2) p(S) S^(-1/2)``
    (built from explicit matrices and reduced by an SVD), since
    ``||Mx||_S = ||S^(1/2) M x||``.
    """
    lam, U = frame_spectrum(frame)
    std = float(np.max(np.abs(p(lam))))

    S = frame_operator_matrix(frame)
    P = np.zeros_like(S)
    for a in reversed(p.coeffs):
        P = P @ S + a * np.eye(frame.dim)
    root = np.sqrt(lam)
    S_half = (U * root) @ U.T
    S_mhalf = (U / root) @ U.T
    s = float(np.linalg.norm(S_half @ P @ S_mhalf, 2))
    return std, s
