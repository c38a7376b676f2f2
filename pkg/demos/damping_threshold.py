"""Damping the coupling as exp(-2 sigma delta t) prevents blow-up past a threshold.

For two humps at sigma = 3 (amplitude 3.6) the blow-up time grows with the
damping rate delta until the solution no longer collapses.  The script
brackets that threshold and prints the scale-invariant size of the data,
which grows like C^{2 sigma} and sets how much damping is needed.

    python3 demos/damping_threshold.py        # about ten minutes
"""

from nlsblowup import catalog
from nlsblowup.harness import run_sweep
from nlsblowup.initial_data import build_initial
from nlsblowup.theory import damping_threshold_functional

entry = catalog.get("test20")
g = entry.base.grid.build()
u0 = build_initial(entry.base.profile, g)
print(f"data size functional: {damping_threshold_functional(g, u0, 1, 3):.4f}")

res = run_sweep(entry.base, entry.axis, (0.4, 0.8, 0.9, 0.95))
for r in res.rows:
    v = r.verdict
    print(f"delta = {r.param:4.2f}: " + (f"T* = {v.t_star:.5f}" if v.blew_up else "no blow-up"))
lo, hi = res.report.no_blowup_boundary
print(f"threshold between delta = {lo} and {hi}")
