"""Linear KdV: the boundary-step solution and its time derivatives.

v solves v_t + v_xxx = 0 with v(0, t) = 1 and v(x, 0) = 0.  The line
Im lam = eps in its integral can be moved freely; its t-derivatives are
Airy-type witnesses of non-uniqueness.

    python demos/kdv_airy_witnesses.py
"""

from quarterplane import kdv, nonuniq
from quarterplane.oracle import airy_kdv_u, airy_kdv_v

x, t = 1.0, 1.0
for eps in (0.5, 1.0, 2.0):
    print(f"eps = {eps:3.1f}   v = {kdv.example2_v(x, t, eps):.15f}   "
          f"u = {kdv.example2_u(x, t, eps):.15f}")
print(f"Airy forms  v = {airy_kdv_v(x, t):.15f}   u = {airy_kdv_u(x, t):.15f}")

print()
print("boundary behaviour of v:")
for xx in (1e-2, 1e-3, 1e-4):
    print(f"  v({xx:g}, 1) = {kdv.example2_v(xx, 1.0):.6f}")
for tt in (1e-2, 1e-3, 1e-4):
    print(f"  v(5, {tt:g}) = {kdv.example2_v(5.0, tt):.3e}")

print()
for n in (1, 2):
    w = nonuniq.generate("kdv", n)
    fit = w.certificate.l2_exponent_fit
    print(f"u_{n}: max |u| = {w.max_abs:.4g} at {w.max_at}, "
          f"int u^2 dx ~ t^{fit.p:.3f}, clauses failing: "
          f"{[k for k, v in w.certificate.clauses.items() if not v]}")
