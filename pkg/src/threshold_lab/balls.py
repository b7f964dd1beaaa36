"""Balls-in-boxes experiments: overfull-box counts and coverage waiting times.

The two classic regimes: how many balls fit before some box holds more than
``lam`` of them, and how long until every box holds at least ``lam``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import EULER_GAMMA
from .rng import throw_balls

__all__ = [
    "OccupancyState",
    "count_overfull",
    "packing_threshold_n",
    "waiting_time",
    "waiting_time_mean",
    "normalize_waiting_time",
    "overfull_trial",
    "waiting_trial",
    "normalized_waiting_trial",
]


@dataclass
class OccupancyState:
    """Per-box ball counts after some number of throws."""

    counts: np.ndarray
    n_boxes: int
    balls_thrown: int

    @classmethod
    def from_throws(
        cls, n_balls: int, n_boxes: int, stream: np.random.Generator
    ) -> "OccupancyState":
        balls = throw_balls(n_balls, n_boxes, stream)
        return cls(np.bincount(balls, minlength=n_boxes), n_boxes, n_balls)


def count_overfull(state: OccupancyState, lam: int) -> int:
    """Number of boxes holding at least lam + 1 balls."""
    if lam < 1:
        raise ValueError("lam must be at least 1")
    return int(np.count_nonzero(state.counts >= lam + 1))


def packing_threshold_n(n_boxes: int, lam: int) -> float:
    """Ball count at which boxes start to overflow past lam: N^(lam/(lam+1))."""
    if n_boxes < 1 or lam < 1:
        raise ValueError("need n_boxes >= 1 and lam >= 1")
    return n_boxes ** (lam / (lam + 1))


def waiting_time(n_boxes: int, lam: int, stream: np.random.Generator) -> int:
    """Throw balls until every box holds at least ``lam``; return the count.

    Balls are drawn lazily in box-count-sized batches, so memory stays O(N)
    while the waiting time itself is unbounded.  The exact stopping index is
    recovered inside the final batch from per-box occurrence positions.
    """
    if n_boxes < 1 or lam < 1:
        raise ValueError("need n_boxes >= 1 and lam >= 1")
    counts = np.zeros(n_boxes, dtype=np.int64)
    thrown = 0
    chunk = max(n_boxes, 64)
    while True:
        balls = throw_balls(chunk, n_boxes, stream)
        fresh = np.bincount(balls, minlength=n_boxes)
        if int((counts + fresh).min()) >= lam:
            deficit = lam - counts
            need = deficit > 0
            order = np.argsort(balls, kind="stable")
            starts = np.concatenate(([0], np.cumsum(fresh)[:-1]))
            # position of each needy box's final required ball within the batch
            last_pos = order[starts[need] + deficit[need] - 1]
            return thrown + int(last_pos.max()) + 1
        counts += fresh
        thrown += chunk


def waiting_time_mean(n_boxes: int, lam: int) -> float:
    """Leading-order mean of the lam-coverage waiting time.

    N(ln N + (lam-1) ln ln N + gamma - ln (lam-1)!), valid as N grows; the
    omitted correction vanishes with N but is material at desk scale for
    lam >= 2.
    """
    if n_boxes < 3:
        raise ValueError("n_boxes must be at least 3 (ln ln N must be positive)")
    if lam < 1:
        raise ValueError("lam must be at least 1")
    n = float(n_boxes)
    return n * (
        math.log(n)
        + (lam - 1) * math.log(math.log(n))
        + EULER_GAMMA
        - math.lgamma(lam)  # ln (lam-1)!, overflow-free
    )


def normalize_waiting_time(t: float, n_boxes: int, lam: int) -> float:
    """Center and scale a waiting time onto the Gumbel limit axis."""
    if n_boxes < 3:
        raise ValueError("n_boxes must be at least 3 (ln ln N must be positive)")
    if lam < 1:
        raise ValueError("lam must be at least 1")
    n = float(n_boxes)
    return t / n - math.log(n) - (lam - 1) * math.log(math.log(n)) + math.lgamma(lam)


def overfull_trial(
    stream: np.random.Generator, n_boxes: int, lam: int, n_balls: int
) -> tuple[int, bool]:
    """One packing trial: (overfull-box count X, X == 0)."""
    state = OccupancyState.from_throws(n_balls, n_boxes, stream)
    x = count_overfull(state, lam)
    return x, x == 0


def waiting_trial(stream: np.random.Generator, n_boxes: int, lam: int) -> int:
    """One coverage trial: the waiting time T."""
    return waiting_time(n_boxes, lam, stream)


def normalized_waiting_trial(
    stream: np.random.Generator, n_boxes: int, lam: int
) -> float:
    """One coverage trial on the Gumbel axis."""
    return normalize_waiting_time(
        waiting_time(n_boxes, lam, stream), n_boxes, lam
    )
