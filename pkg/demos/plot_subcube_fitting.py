"""
Finding the nearest subcube
===========================

A set with small excess is close to a subcube.  Exact search over all 3^n
subcubes and the coordinate-fixing greedy search both recover it.
"""

# %%
# A perturbed subcube
# -------------------

from cubeiso import cube
from cubeiso.analytic import BoundConfig
from cubeiso.constructions import extremal_near_cube
from cubeiso.explorer import scans
from cubeiso.fitting import fit_exact, fit_greedy

A, planted = scans.random_perturbed_subcube(12, 10, 4, seed=7)
print("planted:", planted.fixed)
print("excess:", round(cube.excess(A), 5))

exact = fit_exact(A)
greedy = fit_greedy(A)
print("exact :", exact.cube.fixed, "distance", exact.symdiff)
print("greedy:", greedy.cube.fixed, "distance", greedy.symdiff)

# %%
# The greedy trace
# ----------------
#
# Each step fixes the coordinate whose smaller section is lightest.

for step in greedy.trace:
    print(f"fix x{step.coordinate}={step.value}  gamma={float(step.gamma):.4f}")

# %%
# Near-subcube constructions
# --------------------------
#
# These sets meet the stability bound with equality, so the distance to the
# best subcube is as large as the excess allows.

for n, N, M in [(4, 1, 2), (6, 1, 3), (8, 2, 4)]:
    E, C = extremal_near_cube(n, N, M)
    r = fit_greedy(E, heuristic=True)
    print(f"(n,N,M)=({n},{N},{M})  delta={r.delta}  excess={cube.excess(E):.4f}")

# %%
# Strict mode refuses sets outside the stable range
# -------------------------------------------------

try:
    fit_greedy(E, BoundConfig(epsilon_c=0.05))
except Exception as err:
    print(type(err).__name__, err)
