#!/usr/bin/env python3
"""Balls in boxes: how long until every box holds lam balls?

Three views of the same experiment:
  1. the empirical mean waiting time against the closed-form prediction,
  2. the shape of the normalized waiting-time distribution against the
     doubly-exponential limit law,
  3. the sharp transition of P(T <= N(ln N + (lam-1) ln ln N + r)) in r.

Run: python demos/coverage_waiting_times.py
"""

import math
from functools import partial

import numpy as np

from threshold_lab.analysis import gumbel_sup_distance, map_trials, run_trials
from threshold_lab.balls import (
    normalize_waiting_time,
    waiting_time,
    waiting_time_mean,
    waiting_trial,
)

SEED = 20260809
TRIALS = 400


def section(title):
    print("\n" + "=" * 72)
    print(f"  {title}")
    print("=" * 72)


def mean_vs_formula():
    section("Empirical mean waiting time vs closed form")
    print(f"  {'N':>7} {'lam':>4} {'MC mean':>12} {'formula':>12} {'rel err':>9}")
    for n in (1000, 10_000):
        for lam in (1, 2, 3):
            ts = map_trials(partial(waiting_trial, n_boxes=n, lam=lam), TRIALS, SEED + lam)
            formula = waiting_time_mean(n, lam)
            rel = abs(np.mean(ts) - formula) / formula
            print(f"  {n:>7} {lam:>4} {np.mean(ts):>12.1f} {formula:>12.1f} {rel:>9.4f}")
    print("  The lam >= 2 rows sit a few percent above the formula: the")
    print("  omitted correction decays only at an iterated-log rate.")


def limit_law_shape():
    section("Normalized waiting times vs exp(-e^-u)")
    n = 10_000
    for lam in (1, 2):
        ts = map_trials(partial(waiting_trial, n_boxes=n, lam=lam), 1000, SEED + 10 * lam)
        xs = [normalize_waiting_time(t, n, lam) for t in ts]
        d = gumbel_sup_distance(xs)
        print(f"  lam={lam}: sup-CDF distance {d:.4f} over {len(xs)} trials "
              f"(location shift grows with lam at fixed N)")


def _within(stream, n_boxes, lam, budget):
    return waiting_time(n_boxes, lam, stream) <= budget


def transition_in_r():
    section("Transition of P(T <= N(ln N + (lam-1) ln ln N + r))")
    n, lam = 10_000, 2
    base = n * (math.log(n) + (lam - 1) * math.log(math.log(n)))
    print(f"  {'r':>5} {'estimate':>9} {'95% CI':>20}")
    for r in (-4, -2, 0, 1, 2, 4):
        s = run_trials(partial(_within, n_boxes=n, lam=lam, budget=base + r * n),
                       TRIALS, SEED + 100 + r)
        print(f"  {r:>5} {s.estimate:>9.3f} [{s.ci_low:.3f}, {s.ci_high:.3f}]")
    print("  Each unit of r moves the coverage probability along the")
    print("  doubly-exponential curve; +-4 already saturates it.")


if __name__ == "__main__":
    mean_vs_formula()
    limit_law_shape()
    transition_in_r()
