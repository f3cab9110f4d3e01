"""Seeded construction of the random objects used in the experiments.

Reproducibility contract
------------------------
* ``make_rng(seed)`` returns ``numpy.random.Generator(PCG64(seed))`` for a
  64-bit unsigned seed.  Every generator below is a pure function of its
  parameters and the generator state.
* Normal variates come from ``Generator.standard_normal`` (NumPy's ziggurat
  method).  Uniform indices come from ``Generator.integers``.
* Sampling without replacement is a partial Fisher-Yates shuffle of
  ``0..N-1``; the first ``k`` slots are the sample.
* Per-trial seeds are ``mix_seed(master, index)``, a SplitMix64 finalizer
  applied to ``master + (index + 1) * 0x9E3779B97F4A7C15`` modulo 2**64.
"""
import numpy as np

from .frame_core import Frame, _vec

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix_seed(master: int, index: int) -> int:
    """Derive an independent 64-bit child seed (SplitMix64 finalizer)."""
    z = (int(master) + (int(index) + 1) * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & _MASK64))


def sample_without_replacement(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """``k`` distinct indices from ``range(n)``, uniformly, in draw order."""
    if not 0 <= k <= n:
        raise ValueError(f"cannot draw {k} distinct indices from {n}")
    pool = np.arange(n)
    for i in range(k):
        j = int(rng.integers(i, n))
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:k].copy()


def dct_basis(N: int) -> np.ndarray:
    """Orthonormal DCT-II basis of ``R^N``; row ``j`` is basis vector ``e_j``.

    ``e_0(k) = sqrt(1/N)`` and ``e_j(k) = sqrt(2/N) cos(pi/N * j * (k + 1/2))``.
    """
    if N < 1:
        raise ValueError("N must be positive")
    j = np.arange(N)[:, None]
    k = np.arange(N)[None, :]
    E = np.sqrt(2.0 / N) * np.cos(np.pi / N * j * (k + 0.5))
    E[0, :] = np.sqrt(1.0 / N)
    return E


def random_parseval_frame(N: int, d: int, rng: np.random.Generator) -> Frame:
    """``N`` vectors in ``R^d``: the DCT basis restricted to ``d`` random coordinates.

    The selected columns of an orthogonal matrix are orthonormal, so the
    frame operator is the identity.
    """
    if not 1 <= d <= N:
        raise ValueError(f"need 1 <= d <= N, got d={d}, N={N}")
    coords = np.sort(sample_without_replacement(N, d, rng))
    return Frame(dct_basis(N)[:, coords])


def random_unit_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    if d < 1:
        raise ValueError("d must be positive")
    while True:
        x = rng.standard_normal(d)
        nrm = np.linalg.norm(x)
        if nrm > 0:
            return x / nrm


def gaussian_noise(N: int, target_norm: float, rng: np.random.Generator) -> np.ndarray:
    """Standard normal vector rescaled to Euclidean norm ``target_norm``."""
    if N < 1:
        raise ValueError("N must be positive")
    if not target_norm >= 0:
        raise ValueError(f"target_norm must be nonnegative, got {target_norm}")
    while True:
        e = rng.standard_normal(N)
        nrm = np.linalg.norm(e)
        if nrm > 0:
            return e * (target_norm / nrm)


def apply_erasures(frame: Frame, c, k: int, rng: np.random.Generator):
    """Erase ``k`` random coefficients.

    Returns ``(subframe, surviving_coeffs, erased_indices)``; survivors keep
    their original relative order.
    """
    c = _vec(c, frame.count, "coefficients")
    erased = np.sort(sample_without_replacement(frame.count, k, rng))
    keep = np.setdiff1d(np.arange(frame.count), erased, assume_unique=True)
    return frame.subframe(keep), c[keep].copy(), erased.tolist()
