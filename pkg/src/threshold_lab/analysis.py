"""Shared numerical and statistical machinery.

Exact binomial tail sums, Poisson goodness-of-fit in total variation,
Gumbel empirical-CDF distance, Monte Carlo aggregation with Wilson
intervals, stochastic bisection for transition location, and log-log
growth-rate regression.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import BracketError
from .rng import derive_stream

__all__ = [
    "EULER_GAMMA",
    "MonteCarloSummary",
    "ThresholdScan",
    "binomial_tail",
    "binomial_tail_term_ratio",
    "poisson_tv_distance",
    "gumbel_sup_distance",
    "wilson_interval",
    "map_trials",
    "run_trials",
    "threshold_bisect",
    "loglog_slope",
]

EULER_GAMMA = 0.57721566490153286061

# last-term tail approximations are only meaningful for t1 = O(1)
_LAST_TERM_T1_MAX = 20

_Z95 = 1.959963984540054


def _log_binom_pmf(n: int, j: int, p: float) -> float:
    """log of C(n,j) p^j (1-p)^(n-j); -inf where the mass is exactly zero."""
    if p == 0.0:
        return 0.0 if j == 0 else -math.inf
    if p == 1.0:
        return 0.0 if j == n else -math.inf
    return (
        math.lgamma(n + 1)
        - math.lgamma(j + 1)
        - math.lgamma(n - j + 1)
        + j * math.log(p)
        + (n - j) * math.log1p(-p)
    )


def binomial_tail(n: int, p: float, t0: int, t1: int) -> float:
    """Exact partial sum of the Binomial(n, p) pmf over j in [t0, t1].

    Terms are formed in log space and accumulated with compensated summation,
    so the result stays accurate even when individual factors underflow.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if not 0 <= t0 <= t1 <= n:
        raise ValueError("need 0 <= t0 <= t1 <= n")
    return math.fsum(math.exp(_log_binom_pmf(n, j, p)) for j in range(t0, t1 + 1))


def binomial_tail_term_ratio(
    n: int, p: float, t0: int, t1: int, mode: str = "first"
) -> float:
    """Ratio of the exact tail sum to its designated single term.

    ``mode="first"`` designates the t0 term (accurate regime np -> 0);
    ``mode="last"`` designates the t1 term (np -> infinity, t1 bounded).
    The last-term mode rejects t1 > 20 since the approximation is only
    meaningful for bounded t1 and degrades as t1 grows.
    """
    if mode not in ("first", "last"):
        raise ValueError("mode must be 'first' or 'last'")
    if mode == "last" and t1 > _LAST_TERM_T1_MAX:
        raise ValueError(f"last-term mode requires t1 <= {_LAST_TERM_T1_MAX}")
    if not 0 <= t0 <= t1 <= n:
        raise ValueError("need 0 <= t0 <= t1 <= n")
    j = t0 if mode == "first" else t1
    log_term = _log_binom_pmf(n, j, p)
    if log_term == -math.inf:
        raise ValueError("designated term is zero")
    # summed relative to the designated term so the ratio survives even when
    # every absolute term underflows
    return math.fsum(
        math.exp(_log_binom_pmf(n, i, p) - log_term) for i in range(t0, t1 + 1)
    )


def _poisson_pmf(j: int, mu: float) -> float:
    return math.exp(-mu + j * math.log(mu) - math.lgamma(j + 1))


def poisson_tv_distance(histogram: Mapping[int, int], mu: float) -> float:
    """Total variation distance between a count histogram and Poisson(mu).

    The histogram maps observed values to occurrence counts.  Poisson mass
    beyond the largest observed value is folded into the distance.
    """
    if mu <= 0:
        raise ValueError("mu must be positive")
    if not histogram:
        raise ValueError("histogram must be non-empty")
    total = float(sum(histogram.values()))
    if total <= 0:
        raise ValueError("histogram has no mass")
    jmax = max(histogram)
    acc = 0.0
    pois_seen = 0.0
    for j in range(jmax + 1):
        emp = histogram.get(j, 0) / total
        pj = _poisson_pmf(j, mu)
        pois_seen += pj
        acc += abs(emp - pj)
    acc += max(0.0, 1.0 - pois_seen)  # Poisson tail where empirical mass is zero
    return 0.5 * acc


def gumbel_sup_distance(samples: Sequence[float]) -> float:
    """Sup distance between the empirical CDF and the standard Gumbel CDF.

    Evaluated at the sample points on both sides of each CDF step, i.e. the
    Kolmogorov-Smirnov statistic against exp(-e^(-u)).
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = len(x)
    if n < 100:
        raise ValueError("need at least 100 samples")
    cdf = np.exp(-np.exp(-x))
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - cdf), np.max(cdf - (i - 1) / n)))


def wilson_interval(
    successes: int, trials: int, z: float = _Z95
) -> tuple[float, float]:
    """95% Wilson score interval; well behaved for estimates at 0 or 1."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials))
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


@dataclass(frozen=True)
class MonteCarloSummary:
    """Aggregate of a boolean-valued Monte Carlo experiment."""

    trials: int
    successes: int
    estimate: float
    ci_low: float
    ci_high: float
    seed: int


@dataclass
class ThresholdScan:
    """Probe history of a bisection run, plus the located transition point."""

    rows: list[tuple[float, MonteCarloSummary]] = field(default_factory=list)
    p_half: float = math.nan
    tol: float = math.nan
    seed: int = 0


def _run_chunk(args) -> list:
    trial_fn, seed, indices = args
    return [(i, trial_fn(derive_stream(seed, i))) for i in indices]


def map_trials(
    trial_fn: Callable[[np.random.Generator], object],
    trials: int,
    seed: int,
    workers: int = 1,
) -> list:
    """Run ``trial_fn`` once per trial index and return results in index order.

    Each trial receives ``derive_stream(seed, index)``, so the output list is
    identical for any worker count.  With ``workers > 1`` the trial function
    must be picklable (a top-level function or partial of one).
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if workers <= 1 or trials == 1:
        return [trial_fn(derive_stream(seed, i)) for i in range(trials)]
    out: list = [None] * trials
    n_chunks = min(trials, workers * 4)
    chunks = np.array_split(np.arange(trials), n_chunks)
    jobs = [(trial_fn, seed, chunk.tolist()) for chunk in chunks if len(chunk)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_run_chunk, jobs):
            for i, value in part:
                out[i] = value
    return out


def run_trials(
    trial_fn: Callable[[np.random.Generator], bool],
    trials: int,
    seed: int,
    workers: int = 1,
) -> MonteCarloSummary:
    """Estimate a success probability with a Wilson 95% interval."""
    results = map_trials(trial_fn, trials, seed, workers)
    successes = sum(1 for r in results if r)
    lo, hi = wilson_interval(successes, trials)
    return MonteCarloSummary(trials, successes, successes / trials, lo, hi, seed)


def _probe_seed(seed: int, probe_index: int) -> int:
    # fresh sub-seed per probe: reusing trial streams across probes would
    # correlate the bracket decisions
    ss = np.random.SeedSequence(entropy=(int(seed), int(probe_index)))
    return int(ss.generate_state(1, np.uint64)[0])


def threshold_bisect(
    make_trial: Callable[[float], Callable[[np.random.Generator], bool]],
    p_lo: float,
    p_hi: float,
    *,
    target: float = 0.5,
    trials_per_eval: int,
    tol: float,
    seed: int,
    increasing: bool,
    workers: int = 1,
) -> ThresholdScan:
    """Locate the parameter where a monotone property crosses ``target``.

    ``make_trial(param)`` yields the boolean trial function at one parameter
    value; ``increasing`` declares whether the success probability rises with
    the parameter.  Endpoints must straddle the target beyond their Wilson
    intervals or a BracketError is raised.  Every probe gets a fresh sub-seed
    derived from ``(seed, probe_index)``.
    """
    if not p_lo < p_hi:
        raise ValueError("need p_lo < p_hi")
    if tol <= 0:
        raise ValueError("tol must be positive")
    scan = ThresholdScan(tol=tol, seed=seed)
    probe = 0

    def evaluate(param: float) -> MonteCarloSummary:
        nonlocal probe
        summary = run_trials(
            make_trial(param), trials_per_eval, _probe_seed(seed, probe), workers
        )
        probe += 1
        scan.rows.append((param, summary))
        return summary

    s_lo = evaluate(p_lo)
    s_hi = evaluate(p_hi)
    lo_ok = s_lo.ci_high < target if increasing else s_lo.ci_low > target
    hi_ok = s_hi.ci_low > target if increasing else s_hi.ci_high < target
    if not (lo_ok and hi_ok):
        raise BracketError(
            f"endpoint estimates do not straddle target={target}: "
            f"P({p_lo:g})={s_lo.estimate:.3f} "
            f"[{s_lo.ci_low:.3f},{s_lo.ci_high:.3f}], "
            f"P({p_hi:g})={s_hi.estimate:.3f} "
            f"[{s_hi.ci_low:.3f},{s_hi.ci_high:.3f}]"
        )

    lo, hi = p_lo, p_hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        est = evaluate(mid).estimate
        below = est < target
        if below == increasing:
            lo = mid
        else:
            hi = mid
    scan.p_half = 0.5 * (lo + hi)
    scan.rows.sort(key=lambda row: row[0])
    return scan


def loglog_slope(points: Iterable[tuple[float, float]]) -> float:
    """Least-squares slope of log y against log x; the empirical growth exponent."""
    pts = list(points)
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    xs = np.array([p[0] for p in pts], dtype=float)
    ys = np.array([p[1] for p in pts], dtype=float)
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ValueError("points must be strictly positive")
    if len(np.unique(xs)) != len(xs):
        raise ValueError("x values must be distinct")
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])
