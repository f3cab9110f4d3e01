"""Monte-Carlo harness for the two reconstruction studies.

Example 1: random Parseval frame (DCT restricted to ``d`` of ``N``
coordinates), noisy coefficients, random erasures; classical algorithm with
``alpha = 1`` against the greedy algorithm on the surviving sub-frame.

Example 2: random Parseval frame, clipped coefficients; saturated algorithm
with fixed relaxation 1 against its greedy counterpart.

Every trial draws its own generator from ``mix_seed(seed, trial)``, so the
summary is independent of how trials are scheduled across workers.
"""
import csv
import logging
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Tuple

import numpy as np

from .algorithms import Measurements, StoppingRule, classical_run, greedy_s_run
from .frame_core import NotAFrame, analyze, optimal_frame_bounds
from .generators import (
    apply_erasures,
    gaussian_noise,
    make_rng,
    mix_seed,
    random_parseval_frame,
    random_unit_vector,
)
from .saturation import StalledActiveSet, saturate, saturated_run

log = logging.getLogger(__name__)

EXAMPLE1_WINDOW = (1, 15)
EXAMPLE2_WINDOW = (1, 50)
MAX_REDRAWS = 1000


@dataclass(frozen=True)
class TrialConfig:
    d: int = 100
    N: int = 200
    trials: int = 1000
    iters: int = 50
    seed: int = 0
    noise_norm: float = 1e-6
    erasures: int = 10
    lam: Optional[float] = None
    classical_alpha: float = 1.0

    def __post_init__(self):
        if self.d < 1 or self.N < 1:
            raise ValueError("d and N must be positive")
        if self.d > self.N:
            raise ValueError(f"d={self.d} exceeds N={self.N}")
        if not 0 <= self.erasures <= self.N:
            raise ValueError(f"erasures must lie in [0, N], got {self.erasures}")
        if self.trials < 1 or self.iters < 1:
            raise ValueError("trials and iters must be positive")
        if not self.noise_norm >= 0:
            raise ValueError("noise_norm must be nonnegative")
        if self.lam is not None and not self.lam > 0:
            raise ValueError("lambda must be positive")
        if not self.classical_alpha > 0:
            raise ValueError("classical_alpha must be positive")


def example1_config(**overrides) -> TrialConfig:
    return replace(TrialConfig(), **overrides)


def example2_config(**overrides) -> TrialConfig:
    base = TrialConfig(N=250, noise_norm=0.0, erasures=0, lam=0.08)
    return replace(base, **overrides)


@dataclass
class AlgorithmStats:
    mean: np.ndarray
    p10: np.ndarray
    p90: np.ndarray


@dataclass
class StatsSummary:
    """Per-iteration error statistics, one entry per algorithm (insertion order)."""

    stats: Dict[str, AlgorithmStats] = field(default_factory=dict)
    reduction_rates: Dict[str, float] = field(default_factory=dict)
    window: Tuple[int, int] = (1, 15)
    trials: int = 0
    redraws: int = 0

    @property
    def algorithms(self):
        return list(self.stats)

    @property
    def iters(self) -> int:
        if not self.stats:
            return -1
        return len(next(iter(self.stats.values())).mean) - 1


def nearest_rank(sorted_values: np.ndarray, p: float):
    """Nearest-rank percentile along axis 0 of an already sorted array."""
    n = sorted_values.shape[0]
    rank = max(1, math.ceil(p * n))
    return sorted_values[rank - 1]


def summarize_errors(errors: np.ndarray) -> AlgorithmStats:
    """``errors`` has shape ``(trials, iters + 1)``."""
    s = np.sort(errors, axis=0)
    return AlgorithmStats(errors.mean(axis=0), nearest_rank(s, 0.10), nearest_rank(s, 0.90))


def reduction_rate(mean_err, n1: int, n2: int) -> float:
    """Per-iteration geometric rate ``(m[n2] / m[n1]) ** (1 / (n2 - n1))``.

    A nonpositive mean error yields 0.0 and a RuntimeWarning.
    """
    mean_err = np.asarray(mean_err, dtype=np.float64)
    if not 0 <= n1 < n2 < len(mean_err):
        raise ValueError(f"invalid window ({n1}, {n2}) for {len(mean_err)} iterates")
    a, b = mean_err[n1], mean_err[n2]
    if not (a > 0 and b > 0):
        warnings.warn(f"nonpositive mean error in window ({n1}, {n2}); rate reported as 0",
                      RuntimeWarning, stacklevel=2)
        return 0.0
    return float((b / a) ** (1.0 / (n2 - n1)))


def _errors(trace, iters):
    err = np.full(iters + 1, np.nan)
    e = np.asarray(trace.err_std)
    err[: len(e)] = e
    # converged early: the iterate no longer moves
    err[len(e):] = e[-1]
    return err


def _attempt_seed(trial_seed, attempt):
    return trial_seed if attempt == 0 else mix_seed(trial_seed, attempt)


def example1_trial(cfg: TrialConfig, index: int):
    """One trial; returns ``(classical_errors, greedy_errors, redraws)``."""
    trial_seed = mix_seed(cfg.seed, index)
    stop = StoppingRule(cfg.iters)
    for attempt in range(MAX_REDRAWS):
        rng = make_rng(_attempt_seed(trial_seed, attempt))
        frame = random_parseval_frame(cfg.N, cfg.d, rng)
        x = random_unit_vector(cfg.d, rng)
        c = analyze(frame, x) + gaussian_noise(cfg.N, cfg.noise_norm, rng)
        sub, c_sub, _ = apply_erasures(frame, c, cfg.erasures, rng)
        try:
            optimal_frame_bounds(sub)
        except NotAFrame:
            continue
        m = Measurements(c_sub, cfg.noise_norm)
        cl = classical_run(sub, m, cfg.classical_alpha, stop, truth=x)
        gr = greedy_s_run(sub, m, stop, truth=x)
        return _errors(cl, cfg.iters), _errors(gr, cfg.iters), attempt
    raise RuntimeError(f"trial {index}: no valid sub-frame after {MAX_REDRAWS} draws")


def example2_trial(cfg: TrialConfig, index: int):
    """One trial; returns ``(fixed_errors, greedy_errors, redraws)``."""
    trial_seed = mix_seed(cfg.seed, index)
    stop = StoppingRule(cfg.iters)
    for attempt in range(MAX_REDRAWS):
        rng = make_rng(_attempt_seed(trial_seed, attempt))
        frame = random_parseval_frame(cfg.N, cfg.d, rng)
        x = random_unit_vector(cfg.d, rng)
        sat = saturate(frame, x, cfg.lam)
        try:
            fx = saturated_run(frame, sat, "fixed", cfg.classical_alpha, stop, truth=x)
            gr = saturated_run(frame, sat, "greedy", stop=stop, truth=x)
        except StalledActiveSet:
            continue
        return _errors(fx, cfg.iters), _errors(gr, cfg.iters), attempt
    raise RuntimeError(f"trial {index}: active set stalled on {MAX_REDRAWS} draws")


def _run_chunk(args):
    trial_fn, cfg, indices = args
    return [trial_fn(cfg, i) for i in indices]


def _run_trials(trial_fn, cfg, workers):
    indices = list(range(cfg.trials))
    if workers is None or workers <= 1:
        results = [trial_fn(cfg, i) for i in indices]
    else:
        chunks = [indices[k::workers] for k in range(workers)]
        results = [None] * cfg.trials
        with ProcessPoolExecutor(workers) as pool:
            for chunk, out in zip(chunks, pool.map(_run_chunk, [(trial_fn, cfg, ch) for ch in chunks])):
                for i, r in zip(chunk, out):
                    results[i] = r
    a = np.array([r[0] for r in results])
    b = np.array([r[1] for r in results])
    redraws = sum(r[2] for r in results)
    return a, b, redraws


def _summarize(names, errs, window, cfg, redraws):
    summary = StatsSummary(window=window, trials=cfg.trials, redraws=redraws)
    for name, e in zip(names, errs):
        summary.stats[name] = summarize_errors(e)
        if window[1] <= cfg.iters:
            summary.reduction_rates[name] = reduction_rate(summary.stats[name].mean, *window)
    return summary


def run_example1(cfg: TrialConfig, workers: Optional[int] = None) -> StatsSummary:
    if cfg.lam is not None:
        raise ValueError("example 1 does not use saturation")
    cl, gr, redraws = _run_trials(example1_trial, cfg, workers)
    if redraws:
        log.info("example1: %d degenerate sub-frames redrawn", redraws)
    window = EXAMPLE1_WINDOW if cfg.iters >= EXAMPLE1_WINDOW[1] else (min(1, cfg.iters - 1), cfg.iters)
    return _summarize(("classical", "greedy"), (cl, gr), window, cfg, redraws)


def run_example2(cfg: TrialConfig, workers: Optional[int] = None) -> StatsSummary:
    if cfg.lam is None:
        raise ValueError("example 2 requires lambda")
    if cfg.erasures or cfg.noise_norm:
        raise ValueError("example 2 uses exact, erasure-free coefficients")
    fx, gr, redraws = _run_trials(example2_trial, cfg, workers)
    if redraws:
        log.info("example2: %d stalled trials redrawn", redraws)
    window = EXAMPLE2_WINDOW if cfg.iters >= EXAMPLE2_WINDOW[1] else (min(1, cfg.iters - 1), cfg.iters)
    return _summarize(("saturated", "greedy_saturated"), (fx, gr), window, cfg, redraws)


CSV_HEADER = ("iter", "alg", "mean", "p10", "p90")


def _fmt(v) -> str:
    return format(float(v), ".17g")


def write_csv(summary: StatsSummary, path) -> None:
    """``iter,alg,mean,p10,p90`` rows sorted by ``(alg, iter)``."""
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for name in sorted(summary.stats):
                st = summary.stats[name]
                for n in range(len(st.mean)):
                    w.writerow((n, name, _fmt(st.mean[n]), _fmt(st.p10[n]), _fmt(st.p90[n])))
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc


def read_csv(path) -> StatsSummary:
    rows: Dict[str, list] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header}")
        for it, alg, mean, p10, p90 in reader:
            rows.setdefault(alg, []).append((int(it), float(mean), float(p10), float(p90)))
    summary = StatsSummary()
    for alg, vals in rows.items():
        vals.sort()
        arr = np.array([v[1:] for v in vals])
        summary.stats[alg] = AlgorithmStats(arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy())
    return summary
