"""Grid norms, mixed space-time norms over admissible pairs, and rate fitting.

Spatial norms are plain grid quadrature (dx * sum) on the uniform periodic
grid, which is spectrally accurate for the band-limited fields produced by the
integrator.  Mixed norms compose an L^q trapezoid in time with L^r in space;
the pair (inf, 2) degenerates to a running maximum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateFit, InsufficientSamples

INF = math.inf

#: Value floor below which fit samples count as roundoff-contaminated.
FIT_FLOOR = 1e-13

#: Default fit window as fractions of the horizon, avoiding the initialization
#: transient and the horizon itself.
FIT_WINDOW_FRACTIONS = (0.2, 0.9)


def lp_norm(values, dx, p):
    """(dx * sum |u|^p)^{1/p}; max |u| for p = inf."""
    a = np.abs(values)
    if p == INF:
        return float(a.max())
    if p == 2.0:
        return float(math.sqrt(dx * float(np.sum(a * a))))
    return float((dx * float(np.sum(a**p))) ** (1.0 / p))


def mixed_time_norm(times, space_norms, q, t_start=None):
    """L^q in time (trapezoid) of precomputed spatial norms, from t_start on."""
    times = np.asarray(times, dtype=float)
    vals = np.asarray(space_norms, dtype=float)
    if t_start is not None:
        keep = times >= t_start - 1e-12
        times, vals = times[keep], vals[keep]
    if len(times) == 0:
        return 0.0
    if q == INF:
        return float(vals.max())
    return float(np.trapezoid(vals**q, times) ** (1.0 / q))


def strichartz_norm(times, fields, dx, pairs, t_start=None):
    """max over admissible pairs (q, r) of || ||u(t)||_{L^r} ||_{L^q([t_start, T])}.

    ``fields`` is a sequence of same-length complex arrays indexed like
    ``times``.  Requires at least four snapshots at or after t_start.
    """
    times = np.asarray(times, dtype=float)
    if t_start is None:
        t_start = times[0]
    n_avail = int(np.sum(times >= t_start - 1e-12))
    if n_avail < 4:
        raise InsufficientSamples(
            f"{n_avail} snapshots at/after t = {t_start:g}; need >= 4")
    best = 0.0
    for q, r in pairs:
        space = np.array([lp_norm(f, dx, r) for f in fields])
        best = max(best, mixed_time_norm(times, space, q, t_start))
    return best


def strichartz_suffix(times, space_norms_by_r, pairs):
    """Per-start-index mixed norms: out[m] = max over pairs of L^q([t_m, T]) of L^r.

    Works from precomputed spatial norms (one array per r) and accumulates the
    trapezoid from the right, so the whole suffix family costs O(M) per pair.
    """
    times = np.asarray(times, dtype=float)
    m = len(times)
    out = np.zeros(m)
    for q, r in pairs:
        vals = np.asarray(space_norms_by_r[r], dtype=float)
        if q == INF:
            suffix = np.maximum.accumulate(vals[::-1])[::-1]
        else:
            vq = vals**q
            acc = np.zeros(m)
            for i in range(m - 2, -1, -1):
                acc[i] = acc[i + 1] + 0.5 * (vq[i] + vq[i + 1]) * (times[i + 1] - times[i])
            suffix = acc ** (1.0 / q)
        out = np.maximum(out, suffix)
    return out


@dataclass
class DecayFit:
    """Least-squares fit of values ~ C exp(-rate * t) on log ordinates."""

    times: np.ndarray
    values: np.ndarray
    c: float
    rate: float
    r_squared: float

    def to_dict(self):
        return {"c": self.c, "rate": self.rate, "r_squared": self.r_squared,
                "n_samples": int(len(self.times))}


def fit_exponential(times, values, floor=FIT_FLOOR, window=None):
    """Fit (C, rate) minimizing sum (log v_i - log C + rate t_i)^2.

    Samples below ``floor`` are dropped as roundoff-contaminated; ``window``
    restricts to t in [window[0], window[1]].  DegenerateFit when fewer than
    four usable samples remain.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    keep = v > floor
    if window is not None:
        keep &= (t >= window[0] - 1e-12) & (t <= window[1] + 1e-12)
    t, v = t[keep], v[keep]
    if len(t) < 4:
        raise DegenerateFit(f"{len(t)} usable samples; need >= 4")
    y = np.log(v)
    slope, intercept = np.polyfit(t, y, 1)
    resid = y - (slope * t + intercept)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return DecayFit(times=t, values=v, c=float(np.exp(intercept)),
                    rate=float(-slope), r_squared=float(r2))


@dataclass
class NormReport:
    """Per-time spatial norms plus mixed-norm values over the sampled pairs."""

    times: np.ndarray
    per_time: dict = field(default_factory=dict)   # name -> array over times
    strichartz: dict = field(default_factory=dict)  # (q, r) -> value on [t0, T]

    def to_dict(self):
        return {
            "times": [float(x) for x in self.times],
            "per_time": {k: [float(x) for x in v] for k, v in self.per_time.items()},
            "strichartz": {f"({q:g},{r:g})": float(v) for (q, r), v in self.strichartz.items()},
        }


def norm_report(times, fields, dx, r2, pairs=None, grads=None):
    """Assemble the standard norm table for a time-indexed family of fields.

    Columns: L^2, L^{r2}, L^{r2'}, L^inf, and the gradient L^2 when gradient
    fields are supplied.  When ``pairs`` is given, each pair's mixed norm over
    the full span is attached.
    """
    r2p = r2 / (r2 - 1.0)
    report = NormReport(times=np.asarray(times, dtype=float))
    cols = {"l2": 2.0, "lr2": r2, "lr2p": r2p, "linf": INF}
    for name, p in cols.items():
        report.per_time[name] = np.array([lp_norm(f, dx, p) for f in fields])
    if grads is not None:
        report.per_time["grad_l2"] = np.array([lp_norm(g, dx, 2.0) for g in grads])
    if pairs is not None:
        for q, r in pairs:
            space = np.array([lp_norm(f, dx, r) for f in fields])
            report.strichartz[(q, r)] = mixed_time_norm(report.times, space, q)
    return report
