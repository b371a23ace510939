import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from geogroup.iid import (
    KL_EPSILON,
    Histogram,
    MeasurementSet,
    build_histograms,
    d_max_from_pairs,
    d_min_from_pairs,
    estimate_d_max,
    estimate_d_min,
    iid_report,
    kl_divergence,
    pearson,
    read_measurements,
    write_measurements,
)


def hist(*p):
    p = np.asarray(p, dtype=float)
    return Histogram(np.linspace(0, 1, len(p) + 1), p)


def test_single_bin_occupancy():
    m = MeasurementSet(("a", "b"), [[0, 0], [1, 0]], [[0.0, 1.0], [0.1, 1.0], [0.05, 1.0]])
    ha, hb = build_histograms(m, 5)
    assert list(ha.probabilities) == [1, 0, 0, 0, 0]
    assert list(hb.probabilities) == [0, 0, 0, 0, 1]  # global max lands in the last bin
    assert len(ha.bin_edges) == 6


def test_half_and_half_counting():
    # global range 0..5 -> unit bins; ten readings in bin 1, ten in bin 3
    col = [0.5] * 10 + [2.5] * 10
    other = [0.0] + [5.0] * 19
    m = MeasurementSet(("a", "b"), [[0, 0], [1, 0]], np.column_stack([col, other]))
    assert list(build_histograms(m, 5)[0].probabilities) == [0.5, 0, 0.5, 0, 0]


def test_degenerate_range():
    m = MeasurementSet(("a",), [[0, 0]], [[3.0], [3.0]])
    with pytest.raises(ValueError, match="degenerate"):
        build_histograms(m)


@st.composite
def sample_matrices(draw):
    n = draw(st.integers(2, 30))
    locs = draw(st.integers(1, 6))
    cells = draw(st.lists(st.floats(-1e6, 1e6), min_size=n * locs, max_size=n * locs))
    return np.array(cells).reshape(n, locs)


@settings(max_examples=50)
@given(sample_matrices(), st.integers(1, 8))
def test_histograms_normalize(data, bins):
    if data.max() == data.min():
        return
    locs = data.shape[1]
    m = MeasurementSet(tuple(map(str, range(locs))), np.zeros((locs, 2)), data)
    for h in build_histograms(m, bins):
        assert h.bin_count == bins
        assert (h.probabilities >= 0).all()
        assert abs(h.probabilities.sum() - 1) < 1e-9


def test_kl_examples():
    p, q = hist(0.5, 0.5), hist(0.25, 0.75)
    assert kl_divergence(p, p) == 0.0
    expected = 0.5 * math.log(2) + 0.5 * math.log(2 / 3)
    assert kl_divergence(p, q) == pytest.approx(expected, abs=1e-8)
    assert round(expected, 5) == 0.14384
    assert kl_divergence(q, p) != pytest.approx(kl_divergence(p, q), abs=1e-3)


def test_kl_bits_and_mismatched_edges():
    p, q = hist(0.5, 0.5), hist(0.25, 0.75)
    assert kl_divergence(p, q, base=2) == pytest.approx(kl_divergence(p, q) / math.log(2))
    with pytest.raises(ValueError):
        kl_divergence(p, Histogram(np.array([0, 2, 4.0]), np.array([0.5, 0.5])))


def test_kl_finite_with_empty_bins():
    v = kl_divergence(hist(1, 0, 0), hist(0, 0, 1))
    assert math.isfinite(v) and v > 10


def test_pearson_huge_finite_inputs():
    x = np.array([1e200, -1e200, 3e200, 0.0])
    assert pearson(x, x) == pytest.approx(1.0)
    assert pearson(x, -2 * x) == pytest.approx(-1.0)


def test_pearson_examples():
    x = np.arange(10.0)
    assert pearson(x, x) == pytest.approx(1.0)
    assert pearson(x, -x) == pytest.approx(-1.0)
    assert pearson([1, 2, 3], [2, 4, 7]) == pytest.approx(0.9934, abs=5e-5)
    with pytest.raises(ValueError, match="undefined"):
        pearson([1, 1, 1], [1, 2, 3])
    with pytest.raises(ValueError):
        pearson([1, 2], [1, 2, 3])


@st.composite
def paired_vectors(draw):
    n = draw(st.integers(3, 30))
    vals = st.floats(-1e3, 1e3)
    xs = draw(st.lists(vals, min_size=n, max_size=n))
    noise = draw(st.lists(vals, min_size=n, max_size=n))
    return np.array(xs), np.array(xs) + np.array(noise)


@settings(max_examples=100)
@given(paired_vectors(), st.floats(0.01, 100), st.floats(-100, 100))
def test_pearson_range_and_affine_invariance(xy, a, b):
    x, y = xy
    if np.ptp(x) < 1e-3 or np.ptp(y) < 1e-3:
        return
    r = pearson(x, y)
    assert -1 <= r <= 1
    assert pearson(a * x + b, y) == pytest.approx(r, abs=1e-7)


@settings(max_examples=100)
@given(st.lists(st.floats(0, 1), min_size=2, max_size=8), st.randoms(use_true_random=False))
def test_kl_nonnegative(ps, rnd):
    p = np.array(ps) + 1e-3
    q = np.array([rnd.random() for _ in ps]) + 1e-3
    assert kl_divergence(hist(*(p / p.sum())), hist(*(q / q.sum()))) >= 0


def _grid_set(values_by_location, spacing=1.0):
    """Locations on a line at x = 0, spacing, ...; samples per location."""
    labels = tuple(f"h{i}" for i in range(len(values_by_location)))
    pos = [[i * spacing, 0.0] for i in range(len(labels))]
    return MeasurementSet(labels, pos, np.column_stack(values_by_location))


def brute_d_max(dist, kl, thr, conf):
    best = 0.0
    for d in sorted(set(dist)):
        members = [k for dd, k in zip(dist, kl) if dd <= d]
        if sum(k < thr for k in members) / len(members) >= conf:
            best = d
    return best


def test_d_max_cases():
    dist = [1, 2, 3, 4, 5, 6]
    assert d_max_from_pairs(dist, [0.01] * 6, 0.1) == 6
    assert d_max_from_pairs(dist, [1.0] * 6, 0.1) == 0
    kl = [0.01, 0.02, 0.03, 0.5, 0.04, 0.05]
    assert brute_d_max(dist, kl, 0.1, 0.95) == 3
    assert d_max_from_pairs(dist, kl, 0.1, 0.95) == 3


@settings(max_examples=100)
@given(st.lists(st.tuples(st.integers(1, 20), st.floats(0, 1)), min_size=1, max_size=12),
       st.floats(0.05, 0.95), st.floats(0.5, 1.0))
def test_d_max_matches_brute_force_and_is_monotone(pairs, thr, conf):
    dist = [float(d) for d, _ in pairs]
    kl = [k for _, k in pairs]
    got = d_max_from_pairs(dist, kl, thr, conf)
    assert got == brute_d_max(dist, kl, thr, conf)
    assert d_max_from_pairs(dist, kl, thr + 0.05, conf) >= got


def brute_d_min(dist, rho, thr, conf):
    if all(r < thr for r in rho):
        return 0.0
    for d in sorted(set(dist)):
        members = [r for dd, r in zip(dist, rho) if dd >= d]
        if sum(r < thr for r in members) / len(members) >= conf:
            return d
    return max(dist)


def test_d_min_cases():
    dist = [1, 2, 3, 4, 5, 6]
    assert d_min_from_pairs(dist, [0.1] * 6, 0.5) == 0
    assert d_min_from_pairs(dist, [0.9] * 6, 0.5) == 6
    rho = [0.95, 0.9, 0.8, 0.4, 0.3, 0.2]  # decays and crosses 0.5 between 3 and 4
    assert brute_d_min(dist, rho, 0.5, 0.95) == 4
    assert d_min_from_pairs(dist, rho, 0.5, 0.95) == 4


@settings(max_examples=100)
@given(st.lists(st.tuples(st.integers(1, 20), st.floats(-1, 1)), min_size=1, max_size=12),
       st.floats(-0.5, 0.95), st.floats(0.5, 1.0))
def test_d_min_matches_brute_force(pairs, thr, conf):
    dist = [float(d) for d, _ in pairs]
    rho = [r for _, r in pairs]
    assert d_min_from_pairs(dist, rho, thr, conf) == brute_d_min(dist, rho, thr, conf)


def _decaying_field(n_loc=8, n_t=20, seed=0):
    """Readings sharing a common signal whose weight fades with distance from h0."""
    rng = np.random.default_rng(seed)
    common = rng.normal(size=n_t)
    cols = []
    for i in range(n_loc):
        w = math.exp(-i / 2)
        cols.append(20 + w * common + (1 - w) * rng.normal(size=n_t) + 0.3 * i)
    return _grid_set(cols, spacing=1.35)


def test_estimators_on_measurement_set():
    m = _decaying_field()
    d_max = estimate_d_max(m, "h0", kl_threshold=1.0)
    d_min = estimate_d_min(m, "h0", corr_threshold=0.5)
    assert 0 <= d_max <= 7 * 1.35 + 1e-9
    assert 0 <= d_min <= 7 * 1.35 + 1e-9
    assert estimate_d_max(m, "h0", kl_threshold=1e9) == pytest.approx(7 * 1.35)
    assert estimate_d_max(m, "h0", kl_threshold=0.0) == 0
    with pytest.raises(KeyError):
        estimate_d_max(m, "nowhere", 0.1)
    with pytest.raises(KeyError):
        estimate_d_min(m, "nowhere", 0.1)


def test_measurement_io_and_report():
    m = _decaying_field(4, 20)
    text = write_measurements(m)
    assert text.splitlines()[0] == "label,h0,h1,h2,h3"
    back = read_measurements(text)
    assert back.labels == m.labels
    assert np.array_equal(back.samples, m.samples)
    report = iid_report(back, "h0", 0.5, 0.5)
    lines = report.splitlines()
    assert lines[0] == "ref,label,distance_m,kl,pearson"
    assert len(lines) == 1 + 3 + 2
    assert lines[-2].startswith("d_max=") and lines[-1].startswith("d_min=")
    ref, label, dist, kl, rho = lines[1].split(",")
    assert (ref, label, dist) == ("h0", "h1", "1.350000")
    with pytest.raises(ValueError):
        read_measurements("x,1\ny,2\n")
