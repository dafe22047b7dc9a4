"""Fit the model's empirical pieces from a recorded signal.

The marginal map ``A`` comes from sample quantiles; the Hurst index comes from
a log-periodogram regression at low frequencies.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonInvertibleCDF, ParseError, SampleTooSmall, ShapeError
from .hermite import EmpiricalCDF, subordinator_from_cdf
from .simulate import rng_for

MIN_POOLED = 1000
MIN_SEGMENT = 512
LOW_FREQ_FRACTION = 0.10


@dataclass(frozen=True, eq=False)
class SignalDataset:
    segments: np.ndarray  # (n_segments, segment_length)
    dt: float = 1.0
    label: str = ""
    source: str = ""

    def __post_init__(self):
        seg = np.asarray(self.segments, dtype=float)
        if seg.ndim != 2 or seg.shape[1] == 0:
            raise ShapeError("segments must form a nonempty 2-D array")
        if not np.all(np.isfinite(seg)):
            raise ValueError("segments must be finite")
        object.__setattr__(self, "segments", seg)

    @property
    def n_segments(self):
        return self.segments.shape[0]

    @property
    def segment_length(self):
        return self.segments.shape[1]

    def pooled(self):
        return self.segments.ravel()

    def map(self, func, label):
        return SignalDataset(func(self.segments), self.dt, label, self.source)


def read_sample_csv(path):
    """Single numeric column (an optional non-numeric header row is skipped)."""
    data, _ = _read_rows(path)
    if data.shape[1] != 1:
        raise ShapeError(f"expected one column, found {data.shape[1]}")
    return data[:, 0]


def _read_rows(path):
    rows = []
    width = None
    header = None
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (len(row) == 1 and not row[0].strip()) or row[0].lstrip().startswith("#"):
                continue
            try:
                vals = [float(x) for x in row]
            except ValueError as exc:
                if not rows and header is None:
                    header = [x.strip() for x in row]
                    continue
                raise ParseError(lineno, str(exc)) from None
            if not all(math.isfinite(v) for v in vals):
                raise ParseError(lineno, "non-finite value")
            if width is None:
                width = len(vals)
            elif len(vals) != width:
                raise ParseError(lineno, f"expected {width} columns, found {len(vals)}")
            rows.append(vals)
    if not rows:
        raise ShapeError("no numeric rows")
    return np.array(rows), header


def load_csv(path, dt=1.0, segment_length=None, label=""):
    """One segment per column, or a single column cut into ``segment_length`` pieces.

    A leading column headed ``t`` or ``time`` (as in files written by
    ``lrdscat simulate``) is taken as the time axis and dropped.
    """
    data, header = _read_rows(path)
    if header and header[0].lower() in ("t", "time") and data.shape[1] > 1:
        data = data[:, 1:]
    nrows, ncols = data.shape
    if ncols > 1:
        if segment_length not in (None, nrows):
            raise ShapeError(f"columns have {nrows} rows, not the requested segment length {segment_length}")
        segs = data.T
    else:
        seg_len = nrows if segment_length is None else int(segment_length)
        if seg_len <= 0 or nrows % seg_len:
            raise ShapeError(f"segment length {seg_len} does not divide {nrows} rows")
        segs = data[:, 0].reshape(-1, seg_len)
    return SignalDataset(segs, dt, label, str(path))


def fit_subordinator(data, *, max_tie_fraction=0.1):
    """``A = empirical quantile of X composed with Phi``, from the pooled sample."""
    x = data.pooled() if isinstance(data, SignalDataset) else np.asarray(data, dtype=float).ravel()
    if x.size < MIN_POOLED:
        raise SampleTooSmall(f"need at least {MIN_POOLED} pooled samples, got {x.size}")
    return subordinator_from_cdf(EmpiricalCDF.from_sample(x, max_tie_fraction=max_tie_fraction))


@dataclass
class HurstEstimate:
    beta: float
    ci: tuple
    slope: float
    short_range: bool
    n_frequencies: int
    frequencies: np.ndarray = field(repr=False, default=None)
    periodogram: np.ndarray = field(repr=False, default=None)

    def to_dict(self):
        return {
            "beta": self.beta,
            "ci_low": self.ci[0],
            "ci_high": self.ci[1],
            "slope": self.slope,
            "short_range": self.short_range,
            "n_frequencies": self.n_frequencies,
        }


def periodogram(segments, dt=1.0):
    """Segment-averaged periodogram (each segment demeaned); positive frequencies only."""
    seg = np.atleast_2d(np.asarray(segments, dtype=float))
    n = seg.shape[1]
    x = seg - seg.mean(axis=1, keepdims=True)
    spec = np.abs(np.fft.rfft(x, axis=1)) ** 2 * dt / (2.0 * math.pi * n)
    lam = 2.0 * math.pi * np.fft.rfftfreq(n, dt)
    return lam[1:], spec[:, 1:]


def _slope(lam, per_seg, band):
    y = np.log(np.mean(per_seg[:, :band], axis=0))
    return float(np.polyfit(np.log(lam[:band]), y, 1)[0])


def estimate_hurst(data, *, n_boot=200, level=0.95, seed=0, fraction=LOW_FREQ_FRACTION):
    """Log-periodogram estimate ``beta = slope + 1`` over the lowest frequencies.

    The confidence interval resamples whole segments with replacement (a
    single-segment dataset gets a degenerate interval).  ``short_range`` is
    set when the estimate or the upper end of its interval reaches 1.
    """
    seg = data.segments if isinstance(data, SignalDataset) else np.atleast_2d(data)
    dt = data.dt if isinstance(data, SignalDataset) else 1.0
    if seg.shape[1] < MIN_SEGMENT:
        raise SampleTooSmall(f"segments need at least {MIN_SEGMENT} samples, got {seg.shape[1]}")
    lam, per = periodogram(seg, dt)
    band = max(4, int(fraction * lam.size))
    s = _slope(lam, per, band)
    beta = s + 1.0
    k = per.shape[0]
    if k > 1 and n_boot > 0:
        rng = rng_for(seed, 0)
        boots = np.array([_slope(lam, per[rng.integers(0, k, k)], band) + 1.0 for _ in range(n_boot)])
        a = 0.5 * (1.0 - level)
        ci = (float(np.quantile(boots, a)), float(np.quantile(boots, 1 - a)))
    else:
        ci = (beta, beta)
    # flagged when the data cannot exclude a spectrum that is flat at the origin
    short = bool(beta >= 1.0 or ci[1] >= 1.0)
    return HurstEstimate(beta, ci, s, short, band, lam[:band], per[:, :band].mean(axis=0))


def gaussianize(data, sub):
    """Map each sample back through ``A**-1`` (``Phi^-1`` of the fitted CDF)."""
    out = data.map(lambda s: np.asarray(sub.inverse(s), dtype=float), "gaussianized")
    if not np.all(np.isfinite(out.segments)):
        raise NonInvertibleCDF("inverse map produced non-finite values")
    return out


def correlation_estimate(data, max_lag):
    """Segment-averaged sample autocorrelation at lags ``0..max_lag``."""
    seg = data.segments - data.segments.mean(axis=1, keepdims=True)
    n = seg.shape[1]
    f = np.fft.rfft(seg, 2 * n, axis=1)
    ac = np.fft.irfft(np.abs(f) ** 2, 2 * n, axis=1)[:, : max_lag + 1] / n
    ac = ac.mean(axis=0)
    return ac / ac[0]
