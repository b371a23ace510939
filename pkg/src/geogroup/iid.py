"""Histogram, KL-divergence and correlation tools for probe measurements.

These turn a set of co-timed readings at known locations into the two
distance thresholds used by clustering and grouping: the largest distance
at which distributions still look identical (``estimate_d_max``) and the
smallest distance at which readings look uncorrelated (``estimate_d_min``).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

KL_EPSILON = 1e-9


@dataclass(frozen=True)
class MeasurementSet:
    labels: tuple[str, ...]
    positions: np.ndarray  # (L, 2)
    samples: np.ndarray  # (sample_count, L)

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float).reshape(-1, 2)
        smp = np.asarray(self.samples, dtype=float)
        labels = tuple(self.labels)
        if smp.ndim != 2 or smp.shape[1] != len(labels):
            raise ValueError("samples must have one column per location")
        if len(pos) != len(labels):
            raise ValueError("one position per location is required")
        if smp.shape[0] < 2:
            raise ValueError("at least two samples per location are required")
        if len(set(labels)) != len(labels):
            raise ValueError("location labels must be unique")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "samples", smp)

    @property
    def sample_count(self) -> int:
        return self.samples.shape[0]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown location label {label!r}") from None

    def column(self, label: str) -> np.ndarray:
        return self.samples[:, self.index(label)]


@dataclass(frozen=True)
class Histogram:
    bin_edges: np.ndarray
    probabilities: np.ndarray

    @property
    def bin_count(self) -> int:
        return len(self.probabilities)


def build_histograms(m: MeasurementSet, bin_count: int = 5) -> list[Histogram]:
    """Per-location histograms on one shared set of equal-width bins.

    The bins span the global min..max of the whole dataset; every bin is
    right-open except the last, which includes the global maximum.
    """
    if bin_count < 1:
        raise ValueError("bin_count must be at least 1")
    lo, hi = float(m.samples.min()), float(m.samples.max())
    if not hi > lo:
        raise ValueError("degenerate range: all readings are equal")
    edges = np.linspace(lo, hi, bin_count + 1)
    # index arithmetic instead of np.histogram: stays valid on tiny ranges
    # where the linspace edges stop being strictly increasing
    scaled = (m.samples - lo) / (hi - lo) * bin_count
    idx = np.clip(np.floor(scaled).astype(np.int64), 0, bin_count - 1)
    hists = []
    for col in idx.T:
        counts = np.bincount(col, minlength=bin_count)
        hists.append(Histogram(edges, counts / m.sample_count))
    return hists


def kl_divergence(p: Histogram, q: Histogram, *, base: float = math.e) -> float:
    """KL(p || q) after adding ``KL_EPSILON`` to every bin and renormalizing."""
    if p.bin_edges.shape != q.bin_edges.shape or not np.array_equal(p.bin_edges, q.bin_edges):
        raise ValueError("histograms must share identical bin edges")
    return _smoothed_kl(p.probabilities, q.probabilities, base)


def _smoothed_kl(p, q, base=math.e) -> float:
    p = np.asarray(p, dtype=float) + KL_EPSILON
    q = np.asarray(q, dtype=float) + KL_EPSILON
    p = p / p.sum()
    q = q / q.sum()
    kl = float(np.sum(p * np.log(p / q)))
    if base != math.e:
        kl /= math.log(base)
    return max(kl, 0.0)


def pearson(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-D vectors of equal length")
    if len(x) < 2:
        raise ValueError("at least two samples are required")
    dx = x - x.mean()
    dy = y - y.mean()
    # r is scale-free; normalizing first keeps the products from overflowing
    mx, my = np.abs(dx).max(), np.abs(dy).max()
    if mx == 0.0 or my == 0.0:
        raise ValueError("undefined correlation: zero variance input")
    dx, dy = dx / mx, dy / my
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("undefined correlation: zero variance input")
    # the 1/(n-1) factors of covariance and both unbiased deviations cancel
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


@dataclass(frozen=True)
class PairReport:
    ref: str
    label: str
    distance_m: float
    kl: float
    pearson: float


def compare_to_reference(m: MeasurementSet, ref_label: str, bin_count: int = 5,
                         *, kl_base: float = math.e) -> list[PairReport]:
    """KL and correlation of every other location against ``ref_label``."""
    r = m.index(ref_label)
    hists = build_histograms(m, bin_count)
    ref_xy = m.positions[r]
    ref_col = m.samples[:, r]
    rows = []
    for i, label in enumerate(m.labels):
        if i == r:
            continue
        d = float(np.hypot(*(m.positions[i] - ref_xy)))
        try:
            rho = pearson(ref_col, m.samples[:, i])
        except ValueError:
            rho = float("nan")
        rows.append(PairReport(ref_label, label, d, kl_divergence(hists[r], hists[i], base=kl_base), rho))
    return rows


def _check_ref(m: MeasurementSet, ref_label: str) -> None:
    m.index(ref_label)
    if len(m.labels) < 2:
        raise ValueError("at least two locations are required")


def d_max_from_pairs(distances, kls, kl_threshold: float, confidence: float = 0.95) -> float:
    """Largest tested distance whose near set is mostly below the KL threshold."""
    d = np.asarray(distances, dtype=float)
    ok = np.asarray(kls, dtype=float) < kl_threshold
    best = 0.0
    for cand in np.unique(d):
        inside = d <= cand
        if ok[inside].mean() >= confidence:
            best = float(cand)
    return best


def d_min_from_pairs(distances, rhos, corr_threshold: float, confidence: float = 0.95) -> float:
    """Smallest tested distance whose far set is mostly below the correlation threshold."""
    d = np.asarray(distances, dtype=float)
    ok = np.asarray(rhos, dtype=float) < corr_threshold
    if ok.all():
        return 0.0
    for cand in np.unique(d):
        outside = d >= cand
        if ok[outside].mean() >= confidence:
            return float(cand)
    return float(d.max())


def estimate_d_max(m: MeasurementSet, ref_label: str, kl_threshold: float,
                   confidence: float = 0.95, bin_count: int = 5) -> float:
    _check_ref(m, ref_label)
    rows = compare_to_reference(m, ref_label, bin_count)
    return d_max_from_pairs([r.distance_m for r in rows], [r.kl for r in rows], kl_threshold, confidence)


def estimate_d_min(m: MeasurementSet, ref_label: str, corr_threshold: float,
                   confidence: float = 0.95) -> float:
    _check_ref(m, ref_label)
    r = m.index(ref_label)
    ref_xy = m.positions[r]
    dists, rhos = [], []
    for i in range(len(m.labels)):
        if i == r:
            continue
        dists.append(float(np.hypot(*(m.positions[i] - ref_xy))))
        rhos.append(pearson(m.samples[:, r], m.samples[:, i]))
    return d_min_from_pairs(dists, rhos, corr_threshold, confidence)


# -- file formats ------------------------------------------------------------

def read_measurements(text: str) -> MeasurementSet:
    """Parse the probe CSV layout.

    Three header rows keyed in the first column (``label``, ``x``, ``y``)
    give one column per location; every following row is one sample time,
    its first cell a free-form time tag::

        label,hall1,hall2
        x,0.0,1.35
        y,0.0,0.0
        t1,21.3,21.1
    """
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if len(rows) < 3 or [r[0].strip() for r in rows[:3]] != ["label", "x", "y"]:
        raise ValueError("expected header rows 'label', 'x', 'y'")
    labels = [c.strip() for c in rows[0][1:]]
    xs = [float(c) for c in rows[1][1:]]
    ys = [float(c) for c in rows[2][1:]]
    if not len(labels) == len(xs) == len(ys):
        raise ValueError("header rows disagree on the number of locations")
    samples = []
    for r in rows[3:]:
        vals = r[1:]
        if len(vals) != len(labels):
            raise ValueError(f"sample row {r[0]!r} has {len(vals)} readings, expected {len(labels)}")
        samples.append([float(v) for v in vals])
    return MeasurementSet(tuple(labels), np.column_stack([xs, ys]), np.array(samples))


def write_measurements(m: MeasurementSet) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["label", *m.labels])
    w.writerow(["x", *(repr(float(v)) for v in m.positions[:, 0])])
    w.writerow(["y", *(repr(float(v)) for v in m.positions[:, 1])])
    for t, row in enumerate(m.samples, 1):
        w.writerow([f"t{t}", *(repr(float(v)) for v in row)])
    return out.getvalue()


def iid_report(m: MeasurementSet, ref_label: str, kl_threshold: float, corr_threshold: float,
               confidence: float = 0.95, bin_count: int = 5, *, kl_base: float = math.e) -> str:
    rows = compare_to_reference(m, ref_label, bin_count, kl_base=kl_base)
    rows.sort(key=lambda r: (r.distance_m, r.label))
    dists = [r.distance_m for r in rows]
    d_max = d_max_from_pairs(dists, [r.kl for r in rows], kl_threshold, confidence)
    d_min = d_min_from_pairs(dists, [r.pearson for r in rows], corr_threshold, confidence)
    out = io.StringIO()
    out.write("ref,label,distance_m,kl,pearson\n")
    for r in rows:
        out.write(f"{r.ref},{r.label},{r.distance_m:.6f},{r.kl:.6f},{r.pearson:.6f}\n")
    out.write(f"d_max={d_max:.6f}\n")
    out.write(f"d_min={d_min:.6f}\n")
    return out.getvalue()
