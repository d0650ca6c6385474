"""
Touching positions live on the difference body's boundary
=========================================================

For convex M and L and a group element g, the translations t for which
M and gL + t touch without overlapping are exactly the boundary points of
the difference body M + (-gL). Each trial plants t in the interior, on the
boundary, or outside, then compares the geometric predicates against the
stratum label.
"""

import numpy as np

from intgeo import bodies as bd
from intgeo.kinematic import separation_lemma_check

rng = np.random.default_rng(3)
M = bd.random_polytope(2, 8, rng)
L = bd.random_polytope(2, 6, rng)

print("M vertices:")
print(np.round(M.vertices, 3))
print("L vertices:")
print(np.round(L.vertices, 3))

res = separation_lemma_check(M, L, 300, rng)
print()
print(f"trials: {res.trials}  (per stratum: {res.stratum_counts})")
print(f"agreements: {res.agreements}")
print(f"disagreements: {res.disagreements}")
print(f"skipped as too close to the boundary to classify: {res.boundary_skips}")
