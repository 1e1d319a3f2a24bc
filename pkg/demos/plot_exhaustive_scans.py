"""
Exhaustive scans over Q_4
=========================

All 65535 nonempty subsets of Q_4 fit in a uint64 mask array, so every
statement can be checked on every set.  Reports do not depend on the number
of worker processes.
"""

# %%
# Verification suites
# -------------------

from cubeiso.explorer import scans

for suite in scans.SUITES:
    rep = scans.verify_suite(4, suite, progress=False)
    print(f"{suite:18s} {rep.summary}")

# %%
# Minimum excess at a given distance from every subcube
# ------------------------------------------------------

ft = scans.f_table(4, progress=False)
for d, c in ft.constants.items():
    print(f"delta*={d:4s}  f estimate={c['f_estimate']:.4f}  j2^-j={c['conjectured']}")

# %%
# Extremal constants
# ------------------

for which in ("talagrand", "kkl"):
    rep = scans.constant_scan(4, which, progress=False)
    print(which, rep.constants)

# %%
# Same answer with more workers
# -----------------------------

one = scans.f_table(3, workers=1, progress=False).to_json()
two = scans.f_table(3, workers=2, progress=False).to_json()
print("identical:", one == two)
