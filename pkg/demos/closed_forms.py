"""
Closed-form intrinsic volumes
=============================

Balls, boxes and ellipses all have exact intrinsic volumes. This walks
through the closed forms and checks the Steiner polynomial against a direct
binomial expansion for the unit ball.
"""

import math

import numpy as np

from intgeo import bodies as bd
from intgeo import volumes as vol

print("unit balls, V_j for j = 0..n")
for n in range(1, 6):
    row = [vol.intrinsic_volume_ball(n, j) for j in range(n + 1)]
    print(f"  n={n}: " + "  ".join(f"{v:9.5f}" for v in row))

print()
print("B^3 sanity: V_1 = 4 (mean width x 2), V_2 = 2 pi (half surface)")
print(f"  V_1 = {vol.intrinsic_volume_ball(3, 1):.12f}")
print(f"  V_2 = {vol.intrinsic_volume_ball(3, 2):.12f}  (2 pi = {2 * math.pi:.12f})")

print()
print("a box with sides 1 x 3 x 2: V_j is the elementary symmetric polynomial")
box = bd.HPolytope(np.vstack([np.eye(3), -np.eye(3)]),
                   np.array([1.0, 3.0, 2.0, 0.0, 0.0, 0.0]))
print("  V =", np.round(vol.closed_intrinsic_volumes(box), 10))

print()
print("ellipse with semiaxes 1.7, 0.4")
e = bd.Ellipsoid(np.zeros(2), np.eye(2), np.array([1.7, 0.4]))
v = vol.closed_intrinsic_volumes(e)
print(f"  V_1 = {v[1]:.10f}  (half perimeter)")
print(f"  V_2 = {v[2]:.10f}  (pi a b = {math.pi * 1.7 * 0.4:.10f})")

print()
print("Steiner: vol(B^n + eps B^n) = sum_j kappa_(n-j) eps^(n-j) V_j(B^n)")
n, eps = 3, 0.37
lhs = vol.kappa(n) * (1.0 + eps) ** n
rhs = sum(vol.kappa(n - j) * eps ** (n - j) * vol.intrinsic_volume_ball(n, j)
          for j in range(n + 1))
print(f"  eps = {eps}: direct (1+eps)^n kappa_n = {lhs:.12f}, sum = {rhs:.12f}")
