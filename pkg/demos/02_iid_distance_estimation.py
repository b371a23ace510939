"""
Estimating d_max and d_min from probe readings
==============================================

A few probes log the same quantity at once. Close to a reference probe
the readings look alike (small KL divergence) and move together (high
correlation). Far away they drift apart. The two distance thresholds fall
out of where those properties break down.
"""

import numpy as np

from geogroup.iid import MeasurementSet, build_histograms, estimate_d_max, estimate_d_min, iid_report

rng = np.random.default_rng(7)
n_probes, n_samples = 8, 200
common = rng.normal(size=n_samples)

cols = []
for i in range(n_probes):
    w = np.exp(-i / 2.5)  # share of the common signal, fading with distance
    cols.append(21 + 0.08 * i**2 + w * common + (1 - w) * rng.normal(size=n_samples))

labels = tuple(f"p{i}" for i in range(n_probes))
where = [[3.0 * i, 0.0] for i in range(n_probes)]  # a line of probes, 3 m apart
m = MeasurementSet(labels, where, np.column_stack(cols))

hists = build_histograms(m, bin_count=5)
print("shared bin edges:", np.round(hists[0].bin_edges, 2))
print("reference histogram:", hists[0].probabilities)

print()
print(iid_report(m, "p0", kl_threshold=0.5, corr_threshold=0.3))

# a stricter KL limit can only shrink d_max
for thr in (2.0, 0.5, 0.1):
    print("kl_threshold=%.1f -> d_max=%.1f m" % (thr, estimate_d_max(m, "p0", thr)))
print("d_min at rho<0.3: %.1f m" % estimate_d_min(m, "p0", 0.3))
