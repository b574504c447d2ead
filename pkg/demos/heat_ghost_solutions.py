"""Nonzero heat solutions with zero initial and boundary data.

The boundary step (u0 = 0, g0 = 1) has solution erfc(x / 2 sqrt t).  Its
time derivatives u_n vanish on both edges of the quarter plane, solve
u_t = u_xx, and are not zero.  What excludes them from the uniqueness
class is the blow-up of int u_n^2 dx as t -> 0.

    python demos/heat_ghost_solutions.py
"""

import numpy as np

from quarterplane import heat, nonuniq
from quarterplane.oracle import erfc_solution
from quarterplane.transforms import HalfLineData

# the step solution from the contour formula agrees with erfc
for x, t in [(0.5, 0.1), (1.0, 1.0), (3.0, 2.0)]:
    v = heat.solve_heat(HalfLineData.step(), x, t)
    print(f"v({x}, {t}) = {v:.15f}   erfc = {float(erfc_solution(x, t)):.15f}")

print()
print(" n   max|u_n|      boundary trace   initial trace   int u_n^2 dx ~ t^p")
for n in range(1, 7):
    w = nonuniq.generate("heat", n)
    c = w.certificate
    print(f"{n:2d}   {w.max_abs:10.4g}   {c.trace_sup_x0:14.2e}   {c.trace_sup_t0:13.2e}"
          f"   p = {c.l2_exponent_fit.p:+.4f}")

# the profile at t = 1 of the first witness
x = np.linspace(0.0, 8.0, 9)[1:]
print()
print("u_1(x, 1):", np.array2string(heat.heat_un(1, x, 1.0, "closed_form"), precision=4))

text, _ = nonuniq.explain(nonuniq.generate("heat", 1))
print()
print(text)
