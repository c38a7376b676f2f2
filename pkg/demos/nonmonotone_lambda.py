"""A larger coupling can delay blow-up.

For a single hump the blow-up time falls as lambda grows.  Two humps with a
focusing phase behave differently: near lambda = 1.7 the solution stops
collapsing at the centre and instead splits, and the blow-up time rises again
until the two humps collapse on their own around lambda = 2.3.  The hump
count at blow-up shows the switch.

    python3 demos/nonmonotone_lambda.py       # a few minutes
"""

from nlsblowup import catalog
from nlsblowup.harness import run_sweep

entry = catalog.get("test2")
values = (1.0, 1.4, 1.7, 1.9, 2.1, 2.2, 2.3, 2.5)
res = run_sweep(entry.base, entry.axis, values)
print(f"{'lambda':>6}  {'T*':>8}  humps")
for r in res.rows:
    v = r.verdict
    print(f"{r.param:6.2f}  {v.t_star:8.5f}  {v.humps_at_blowup}")
print("\n".join(res.report.lines()))
