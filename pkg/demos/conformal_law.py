"""Chirped data at critical power follow the conformal law T_a = aT/(a+T).

Multiplying the data by exp(-i|x|^2/(4a)) maps a solution that blows up at T
to one that blows up at aT/(a+T).  For a < 0 with a + T >= 0 the chirp
defocuses the data enough that the solution is global.  This script runs the
unchirped single Gaussian (sigma = 2, lambda = 1), reads off T, and checks a
few chirps on both branches.

    python3 demos/conformal_law.py            # about five minutes
"""

from nlsblowup import catalog
from nlsblowup.harness import run_sweep

entry = catalog.get("test9")
values = (-0.5, -0.1, 0.25, 1.0)
res = run_sweep(entry.base, entry.axis, values)
T = res.reference_T
print(f"unchirped blow-up time T = {T:.5f}")
print(f"{'a':>6}  {'simulated':>10}  {'aT/(a+T)':>10}")
for r in res.rows:
    sim = "global" if not r.verdict.blew_up else f"{r.verdict.t_star:.5f}"
    pred = "global" if r.predicted is None else f"{r.predicted:.5f}"
    print(f"{r.param:6.2f}  {sim:>10}  {pred:>10}")
