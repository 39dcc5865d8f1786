"""The 1D band function behind the vanishing-field model.

For k = 0 the band is flat (the Landau level 1). For k = 1 it has a
single well; its minimum is the linear model constant.

Run: python3 demos/02_montgomery_band.py
"""
import numpy as np

from magsob.montgomery import minimize_band, scan_band

flat = scan_band(0, np.linspace(-2, 2, 9))
print("k = 0 band samples:", np.array2string(flat, precision=6))

band = minimize_band(1)
print(f"k = 1: minimum {band.lambda2:.8f} at alpha0 = {band.alpha0:.6f}")
print(f"       slope sign changes over the scan: {band.slope_sign_changes()}")

# a coarse text plot of the band
lo, hi = band.nu1.min(), np.percentile(band.nu1, 60)
for a, v in list(zip(band.alphas, band.nu1))[::8]:
    if v <= hi:
        bar = int(50 * (v - lo) / (hi - lo))
        print(f"  alpha {a:6.2f}  {v:8.5f} " + "#" * bar)
