"""Characterization analytics: re-encounter gaps, hourly contact counts,
group re-meeting distribution, and per-group constant-rate fits.

A group whose meetings arrive at a constant rate accumulates them linearly
in time, so the fit regresses cumulative meeting count against meeting
timestamps; the slope estimates the rate and the coefficient of
determination measures how steady the group is.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .tracking import GroupTimeline
from .trace import Trace


class FitError(ValueError):
    """Too few or degenerate meeting times for a rate fit."""


@dataclass(frozen=True)
class Histogram:
    """Fixed-width histogram over [0, inf); bin i covers [i*w, (i+1)*w)."""

    bin_width: float
    counts: np.ndarray

    @property
    def total(self) -> float:
        return float(self.counts.sum())

    @property
    def pmf(self) -> np.ndarray:
        t = self.total
        return self.counts / t if t > 0 else self.counts.astype(float)

    def probability(self, bin_index: int) -> float:
        if bin_index < 0 or bin_index >= self.counts.size:
            return 0.0
        return float(self.pmf[bin_index])

    def to_rows(self) -> list[tuple[float, float]]:
        """(bin_start, probability) rows for CSV export; empty bins included."""
        pmf = self.pmf
        return [(i * self.bin_width, float(p)) for i, p in enumerate(pmf)]

    @classmethod
    def from_values(cls, values: Sequence[float], bin_width: float) -> "Histogram":
        values = np.asarray(values, dtype=float)
        if values.size == 0:
            return cls(bin_width, np.zeros(0, dtype=np.int64))
        idx = np.floor(values / bin_width).astype(np.int64)
        counts = np.bincount(idx)
        return cls(bin_width, counts)


@dataclass(frozen=True)
class PoissonFit:
    """Constant-rate fit of one timeline: rate (per second), R^2, sample size."""

    lambda_hat: float
    r_squared: float
    n_meetings: int


def re_encounter_pdf(trace: Trace, bin_width: float = 60.0) -> Histogram:
    """Distribution of the gap to a pair's next contact, pooled over pairs.

    Gaps are successive start-time differences per pair; pairs with a
    single contact contribute nothing.
    """
    if trace.n_events == 0:
        raise ValueError("empty trace")
    order = np.lexsort((trace.start, trace.b, trace.a))
    a, b, s = trace.a[order], trace.b[order], trace.start[order]
    same_pair = (a[1:] == a[:-1]) & (b[1:] == b[:-1])
    gaps = (s[1:] - s[:-1])[same_pair]
    return Histogram.from_values(gaps, bin_width)


def hourly_contact_histogram(trace: Trace, window: int = 3600) -> Histogram:
    """PMF of contacts-per-pair-per-hour, over (pair, hour) cells with >= 1
    contact. Bin k holds the probability that such a cell has exactly k
    contacts (bin width 1)."""
    if trace.n_events == 0:
        raise ValueError("empty trace")
    win = trace.start // window
    _, counts = np.unique(np.stack([win, trace.a, trace.b], axis=1), axis=0, return_counts=True)
    return Histogram(1.0, np.bincount(counts))


def group_remeeting_pdf(
    timelines: Iterable[GroupTimeline],
    bin_width: float = 3600.0,
    tw: int = 3600,
) -> Histogram:
    """Distribution of (meeting time - first meeting time), pooled over
    timelines with at least two meetings. Times are window midpoints."""
    offsets: list[float] = []
    for tl in timelines:
        if tl.n_meetings < 2:
            continue
        first = tl.meetings[0].window_index
        offsets.extend((m.window_index - first) * tw for m in tl.meetings[1:])
    return Histogram.from_values(offsets, bin_width)


def fit_poisson(
    timeline: GroupTimeline,
    span: tuple[float, float] | None = None,
    tw: int = 3600,
) -> PoissonFit:
    """Least-squares line through (t_i, i) for cumulative meeting count.

    The intercept is fitted, not forced through the origin. lambda_hat is
    the slope in meetings per second; r_squared is 1 - SS_res/SS_tot.
    Raises FitError with fewer than two usable meetings or coincident
    timestamps.
    """
    times = np.asarray(timeline.meeting_times(tw), dtype=float)
    if span is not None:
        t0, t1 = span
        times = times[(times >= t0) & (times < t1)]
    n = times.size
    if n < 2:
        raise FitError(f"need >= 2 meetings for a fit, have {n}")
    if np.ptp(times) == 0:
        raise FitError("all meetings at one timestamp")
    y = np.arange(1, n + 1, dtype=float)
    slope, intercept = np.polyfit(times, y, 1)
    resid = y - (slope * times + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    return PoissonFit(lambda_hat=float(slope), r_squared=1.0 - ss_res / ss_tot, n_meetings=int(n))


def fit_all(
    timelines: Iterable[GroupTimeline],
    span: tuple[float, float] | None = None,
    tw: int = 3600,
    min_meetings: int = 2,
) -> list[tuple[int, PoissonFit]]:
    """Fits for every timeline with enough meetings; degenerate ones skipped."""
    out = []
    for tl in timelines:
        if tl.n_meetings < min_meetings:
            continue
        try:
            out.append((tl.group_id, fit_poisson(tl, span=span, tw=tw)))
        except FitError:
            continue
    return out
