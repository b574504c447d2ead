"""Closed-form reference solutions, computed without any contour quadrature.

Everything here must stay independent of :mod:`quarterplane.contour`;
``tests/test_oracle.py`` checks the import graph.

Special functions come from two unrelated implementations so that each
value can be cross-checked: scipy (Cephes / AMOS, double precision) and
mpmath (arbitrary precision).
"""

import math
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from scipy import special

__all__ = [
    "erfc_solution",
    "erfc_solution_mp",
    "gauss_kernel_derivative",
    "gauss_kernel_l2",
    "airy_ai",
    "airy_ai_scipy",
    "airy_derivative_coeffs",
    "airy_kdv_u",
    "airy_kdv_un",
    "airy_kdv_v",
]

_MP_DPS = 30


def erfc_solution(x, t):
    """erfc(x / (2 sqrt(t))): heat solution with v(0, t) = 1, v(x, 0) = 0."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    return special.erfc(x / (2.0 * np.sqrt(t)))


def erfc_solution_mp(x, t, dps=_MP_DPS):
    """Same quantity via mpmath, as a scalar float; second, independent route."""
    if t <= 0:
        raise ValueError("t must be positive")
    with mpmath.workdps(dps):
        return float(mpmath.erfc(mpmath.mpf(x) / (2 * mpmath.sqrt(mpmath.mpf(t)))))


def gauss_kernel_derivative(x, t):
    """x exp(-x^2 / 4t) / (2 sqrt(pi) t^(3/2))."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    return x * np.exp(-x * x / (4.0 * t)) / (2.0 * math.sqrt(math.pi) * t ** 1.5)


def gauss_kernel_l2(t):
    """int_0^inf gauss_kernel_derivative(x, t)^2 dx = sqrt(pi/2) t^(-3/2) / (4 pi)."""
    t = np.asarray(t, dtype=float)
    return math.sqrt(math.pi / 2.0) / (4.0 * math.pi) * t ** -1.5


def airy_ai(z, derivative=0, dps=_MP_DPS):
    """Ai(z) or Ai'(z) through mpmath (scalar)."""
    with mpmath.workdps(dps):
        return float(mpmath.airyai(mpmath.mpf(z), derivative=derivative))


def airy_ai_scipy(z):
    """(Ai, Ai') from scipy's AMOS wrapper, vectorised."""
    ai, aip, _, _ = special.airy(np.asarray(z, dtype=float))
    return ai, aip


@lru_cache(maxsize=None)
def airy_derivative_coeffs(k):
    """Polynomials (p, q) with Ai^(k)(z) = p(z) Ai(z) + q(z) Ai'(z).

    Coefficient tuples are in increasing powers and exact.  Uses
    Ai'' = z Ai, so d/dz (p Ai + q Ai') = (p' + z q) Ai + (p + q') Ai'.
    """
    if k == 0:
        return (Fraction(1),), (Fraction(0),)
    p, q = airy_derivative_coeffs(k - 1)
    dp = [i * c for i, c in enumerate(p)][1:] or [Fraction(0)]
    dq = [i * c for i, c in enumerate(q)][1:] or [Fraction(0)]
    zq = [Fraction(0)] + list(q)
    n = max(len(dp), len(zq))
    new_p = [(dp[i] if i < len(dp) else 0) + (zq[i] if i < len(zq) else 0) for i in range(n)]
    m = max(len(p), len(dq))
    new_q = [(p[i] if i < len(p) else 0) + (dq[i] if i < len(dq) else 0) for i in range(m)]
    return tuple(Fraction(c) for c in new_p), tuple(Fraction(c) for c in new_q)


def _poly(coeffs, z):
    acc = mpmath.mpf(0)
    for c in reversed(coeffs):
        acc = acc * z + mpmath.mpf(c.numerator) / c.denominator
    return acc


def airy_kdv_un(n, x, t, dps=_MP_DPS):
    """Closed form of -(9/2pi) int (i lam^3)^(n-1) lam^2 exp(i lam x + i lam^3 t) dlam.

    Equal to 9 (-1)^(n-1) (3t)^(-n) Ai^(3n-1)(xi) with xi = x (3t)^(-1/3),
    since that integral is (9/2pi) (-d^3/dx^3)^(n-1) d^2/dx^2 of
    2 pi (3t)^(-1/3) Ai(xi).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if t <= 0:
        raise ValueError("t must be positive")
    with mpmath.workdps(dps):
        x = mpmath.mpf(x)
        s = 3 * mpmath.mpf(t)
        xi = x * s ** (-mpmath.mpf(1) / 3)
        p, q = airy_derivative_coeffs(3 * n - 1)
        ai = mpmath.airyai(xi)
        aip = mpmath.airyai(xi, derivative=1)
        deriv = _poly(p, xi) * ai + _poly(q, xi) * aip
        return float(9 * (-1) ** (n - 1) * s ** (-n) * deriv)


def airy_kdv_u(x, t, dps=_MP_DPS):
    """3 xi Ai(xi) / t, xi = x (3t)^(-1/3): the n = 1 member of :func:`airy_kdv_un`."""
    if t <= 0:
        raise ValueError("t must be positive")
    with mpmath.workdps(dps):
        s = 3 * mpmath.mpf(t)
        xi = mpmath.mpf(x) * s ** (-mpmath.mpf(1) / 3)
        return float(3 * xi * mpmath.airyai(xi) / mpmath.mpf(t))


def airy_kdv_v(x, t, dps=_MP_DPS):
    """3 int_xi^inf Ai(s) ds: linear KdV solution with v(0, t) = 1, v(x, 0) = 0."""
    if t <= 0:
        raise ValueError("t must be positive")
    with mpmath.workdps(dps):
        xi = mpmath.mpf(x) * (3 * mpmath.mpf(t)) ** (-mpmath.mpf(1) / 3)
        return float(3 * mpmath.quad(mpmath.airyai, [xi, xi + 5, mpmath.inf]))
