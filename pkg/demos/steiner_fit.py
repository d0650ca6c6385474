"""
Recovering intrinsic volumes from parallel volumes
==================================================

Dilate a body by several radii, estimate each dilated volume by rejection
sampling, then solve the weighted least-squares system given by the Steiner
polynomial. The fitted coefficients are the intrinsic volumes.
"""

import math

import numpy as np

from intgeo import bodies as bd
from intgeo import volumes as vol

rng = np.random.default_rng(42)
radii = [0.25, 0.5, 0.75, 1.0]
samples = 200_000

for name, body, exact in [
    ("unit square", bd.cube(2, side=1.0, centered=False), [1.0, 2.0, 1.0]),
    ("unit disc", bd.unit_ball(2), [1.0, math.pi, math.pi]),
]:
    fit = vol.steiner_fit(body, radii, samples, rng)
    print(f"{name} ({samples} samples over radii {radii})")
    print("   j   fitted      +-se        exact")
    for j, (v, se, ex) in enumerate(zip(fit.values, fit.std_errors, exact)):
        print(f"   {j}   {v:8.4f}   {se:8.4f}   {ex:8.4f}")
    print()

print("dilated-volume measurements behind the disc fit:")
fit = vol.steiner_fit(bd.unit_ball(2), radii, samples, rng)
for eps, y, se in zip(fit.radii, fit.measured, fit.measured_se):
    print(f"   eps = {eps:.2f}: vol = {y:.4f} +- {se:.4f}"
          f"   (exact pi (1+eps)^2 = {math.pi * (1 + eps) ** 2:.4f})")
