"""Clustered mmWave channels and water-filling, step by step.

Draws a batch of two-cluster channel realizations, checks the average
Frobenius power against the array sizes, and walks one realization through
the water-filling power allocation that defines the fully digital precoder.
"""

import numpy as np

from hybridbeam import (
    ArrayGeometry,
    ClusterParams,
    digital_precoder,
    draw_channel,
    waterfill,
)

tx = ArrayGeometry(32)
rx = ArrayGeometry(5)
clusters = ClusterParams()
rng = np.random.default_rng(2024)

# Average channel power: every steering vector is unit norm and the ray gains
# average to one, so E||H||_F^2 is just n_tx * n_rx.
powers = [np.sum(np.abs(draw_channel(rng, tx, rx, clusters).h) ** 2) for _ in range(2000)]
print(f"mean ||H||_F^2 over 2000 draws: {np.mean(powers):7.2f}   (n_tx*n_rx = {32 * 5})")

# One realization in detail.
ch = draw_channel(np.random.default_rng(9), tx, rx, clusters)
print(f"\nsingular values: {np.round(ch.s, 3)}")

for snr_db in (0.0, 10.0, 20.0):
    noise_var = 10 ** (-snr_db / 10)
    p = waterfill(ch.s, noise_var, budget=5.0)
    bars = ["#" * int(round(8 * x)) or "." for x in p / max(p.max(), 1e-12)]
    print(f"\nwater-filling at SNR {snr_db:4.0f} dB (noise {noise_var:g}):")
    for i, (power, bar) in enumerate(zip(p, bars)):
        print(f"  mode {i + 1}: p = {power:6.3f}  {bar}")

# The precoder carries those powers on the right singular vectors.
f_dbf = digital_precoder(ch, n_streams=5, noise_var=0.1)
print(f"\nprecoder column powers: {np.round(np.linalg.norm(f_dbf, axis=0) ** 2, 3)}")
print(f"total radiated power  : {np.sum(np.abs(f_dbf) ** 2):.6f} (budget 5)")
