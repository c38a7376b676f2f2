"""Two independent integrators agree on the blow-up time.

The split-step Fourier scheme and the relaxation scheme (Crank-Nicolson with
a staggered density) share nothing but the grid and the step control, so
their agreement on T* is a check on both.  The relaxation run is about five
times slower.

    python3 demos/scheme_comparison.py        # a few minutes
"""

from nlsblowup import catalog
from nlsblowup.harness import compare_schemes, with_param

cfg = with_param(catalog.get("test2").base, "lambda", 2.0)
cmp = compare_schemes(cfg)
print(f"split-step  T* = {cmp.tssp.t_star:.5f}  humps = {cmp.tssp.humps_at_blowup}")
print(f"relaxation  T* = {cmp.rs.t_star:.5f}  humps = {cmp.rs.humps_at_blowup}")
print(f"relative gap {cmp.gap:.2e}")
