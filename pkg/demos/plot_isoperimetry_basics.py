"""
Edge boundaries of small cube sets
==================================

Sets are stored as bitmasks over the vertices of Q_n.  This walk-through
builds a few of them and compares their edge boundary with the lower bound
|A| log2(2^n / |A|).
"""

# %%
# Building sets
# -------------
#
# A vertex is an integer whose bit i-1 holds coordinate i.

import numpy as np

from cubeiso import analytic, cube
from cubeiso.constructions import harper_set, tribes

A = cube.make_set(3, [0, 1, 2, 4, 7])
print("hex:", cube.to_hex(A), "size:", A.size, "boundary:", cube.edge_boundary(A))

# %%
# Initial segments of the binary order are optimal
# ------------------------------------------------

n = 6
for k in (1, 3, 8, 20, 32):
    H = harper_set(n, k)
    print(f"k={k:2d}  boundary={cube.edge_boundary(H):3d}  "
          f"bound={analytic.iso_lower_bound(n, k):7.3f}  excess={cube.excess(H):.4f}")

# %%
# Influences of the tribes set
# ----------------------------
#
# Every coordinate of tribes(k, l) has the same influence.

T = tribes(2, 3)
prof = cube.influences(T)
print("betas:", [str(b) for b in prof.beta])
print("total influence:", float(sum(prof.beta)))

# %%
# Random sets sit far above the bound
# -----------------------------------

rng = np.random.default_rng(0)
for _ in range(3):
    R = cube.CubeSet(n, int(rng.integers(1, 1 << 62)))
    print(f"size={R.size:2d}  excess={cube.excess(R):.3f}")
