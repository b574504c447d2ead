"""Heat equation on the quarter plane x > 0, t > 0.

Boundary-step solution, its time derivatives (the non-uniqueness family)
and the general solution for data (u0, g0, f):

    2 pi U = int_R  e^{i lam x - lam^2 t} u0_hat(lam) dlam
           - int_gamma e^{i lam x - lam^2 t} u0_hat(-lam) dlam
           - 2i int_gamma e^{i lam x - lam^2 t} lam g0_tilde(lam^2, t) dlam
           + int_R  e^{i lam x - lam^2 t} f_tilde(lam, lam^2, t) dlam
           - int_gamma e^{i lam x - lam^2 t} f_tilde(-lam, lam^2, t) dlam

``gamma`` is the boundary of {Im lam >= 0, Re lam^2 <= 0}.  By default its
rays are rotated from arg = pi/4 to arg = pi/8 (and 3pi/4 to 7pi/8): every
integrand above decays in the swept wedge, and exp(-lam^2 t) turns from a
chirp into a Gaussian along the rays.  Pass ``angle=math.pi / 4`` to use
the sector boundary itself.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .contour import (
    DEFAULT_TOL,
    ComplexPath,
    PathSegment,
    SpectralIntegrand,
    integrate,
    make_heat_gamma,
    make_heat_gamma0,
)
from .transforms import HalfLineData, _u0_transform, damped_g0, duhamel

__all__ = [
    "HeatPoint",
    "ConditioningError",
    "example1_v",
    "example1_u",
    "heat_un",
    "heat_un_coeffs",
    "solve_heat",
    "DEFAULT_ANGLE",
    "N_CAP",
]

DEFAULT_ANGLE = math.pi / 8
N_CAP = 8
T_MIN = 1e-4


class ConditioningError(ValueError):
    """Requested point is too close to t = 0 for reliable evaluation."""


@dataclass(frozen=True)
class HeatPoint:
    x: float
    t: float

    def __post_init__(self):
        if not (self.x > 0 and self.t > 0):
            raise ValueError(f"point must satisfy x > 0, t > 0, got ({self.x}, {self.t})")


def _line(height, name="line"):
    """Horizontal line Im lam = height, left to right; height may be zero."""
    anchor = complex(0.0, height)
    return ComplexPath((PathSegment.ray(anchor, -1.0, "incoming"),
                        PathSegment.ray(anchor, 1.0, "outgoing")), name)


def _finish(outcome, scale, full_output):
    value = scale * outcome.value
    if full_output:
        return value.real, value, outcome
    return value.real


def example1_v(x, t, variant="gamma", tol=DEFAULT_TOL, *, angle=DEFAULT_ANGLE,
               height=None, full_output=False):
    """Boundary-step solution v (v(0, t) = 1, v(x, 0) = 0) as a contour integral.

    ``variant="gamma"`` integrates (i/pi) [e^{i lam x - lam^2 t} - e^{i lam x}] / lam
    over gamma; ``variant="gamma0"`` integrates (i/pi) e^{i lam x - lam^2 t} / lam
    over gamma0, which keeps distance ``height`` from the pole (default
    min(1, 1/sqrt(t)) so that exp(-lam^2 t) stays O(1) on the segment).

    With ``full_output`` returns ``(value, complex_value, outcome)``; the
    imaginary part is an error indicator.
    """
    p = HeatPoint(x, t)
    if variant == "gamma":
        # bracket written as e^{i lam x} expm1(-lam^2 t) / lam: no cancellation at 0
        integrand = SpectralIntegrand(
            exponent=lambda lam: 1j * lam * p.x,
            amplitude=lambda lam: np.expm1(-lam * lam * p.t) / np.where(lam == 0, 1, lam),
            growth=0.0, scale=2.0)
        out = integrate(make_heat_gamma(angle), integrand, tol * math.pi)
    elif variant == "gamma0":
        if height is None:
            height = min(1.0, 1.0 / math.sqrt(p.t))
        integrand = SpectralIntegrand(
            exponent=lambda lam: 1j * lam * p.x - lam * lam * p.t,
            amplitude=lambda lam: 1.0 / lam,
            poles=(0j,), growth=-1.0, scale=1.0 / height)
        out = integrate(make_heat_gamma0(angle, height), integrand, tol * math.pi)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return _finish(out, 1j / math.pi, full_output)


@lru_cache(maxsize=None)
def heat_un_coeffs(k):
    """Exact coefficients c[j] with

        d^k/dt^k [t^{-3/2} e^{-x^2/4t}] = e^{-x^2/4t} sum_j c[j] x^{2j} t^{-3/2-k-j}.
    """
    if k == 0:
        return (Fraction(1),)
    prev = heat_un_coeffs(k - 1)
    out = [Fraction(0)] * (len(prev) + 1)
    for j, c in enumerate(prev):
        out[j] += -(Fraction(3, 2) + (k - 1) + j) * c
        out[j + 1] += c / 4
    return tuple(out)


def _check_n(n, cap):
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    if n > cap:
        raise ValueError(f"n = {n} exceeds the cap {cap}")
    return int(n)


def _un_closed(n, x, t):
    coeffs = heat_un_coeffs(n - 1)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    acc = np.zeros(np.broadcast(x, t).shape)
    for j, c in enumerate(coeffs):
        acc = acc + float(c) * x ** (2 * j) * t ** (-1.5 - (n - 1) - j)
    return x / (2.0 * math.sqrt(math.pi)) * np.exp(-x * x / (4.0 * t)) * acc


def heat_un(n, x, t, variant="contour", tol=DEFAULT_TOL, *, cap=N_CAP, full_output=False):
    """n-th time derivative of the boundary-step solution.

    Each u_n solves the heat equation with zero initial and zero boundary
    data.  ``variant="contour"`` evaluates

        -(i/pi) int (-lam^2)^(n-1) lam e^{i lam x - lam^2 t} dlam

    along the horizontal line through the saddle point (equivalent to the
    real line, and free of cancellation when x^2/t is large).  The
    substitution lam = mu / sqrt(t) pulls out the natural size t^(-n), and
    ``tol`` applies to the remaining O(1) integral, so it is relative to
    t^(-n).  ``variant="closed_form"`` differentiates
    x t^{-3/2} e^{-x^2/4t} / (2 sqrt(pi)) exactly through :func:`heat_un_coeffs`
    and accepts arrays.
    """
    n = _check_n(n, cap)
    if variant == "closed_form":
        xa, ta = np.asarray(x, dtype=float), np.asarray(t, dtype=float)
        if not (np.all(xa > 0) and np.all(ta > 0)):
            raise ValueError("points must satisfy x > 0, t > 0")
        val = _un_closed(n, xa, ta)
        val = float(val) if val.ndim == 0 else val
        return (val, val + 0j, None) if full_output else val
    p = HeatPoint(x, t)
    if variant != "contour":
        raise ValueError(f"unknown variant {variant!r}")
    xi = p.x / math.sqrt(p.t)
    integrand = SpectralIntegrand(
        exponent=lambda mu: 1j * mu * xi - mu * mu,
        amplitude=lambda mu: (-mu * mu) ** (n - 1) * mu,
        growth=2 * n - 1, scale=1.0)
    out = integrate(_line(0.5 * xi), integrand, tol * math.pi)
    return _finish(out, -1j / math.pi * p.t ** -n, full_output)


def example1_u(x, t, variant="contour", tol=DEFAULT_TOL, *, full_output=False):
    """Time derivative of the boundary-step solution (n = 1 of :func:`heat_un`)."""
    return heat_un(1, x, t, variant, tol, full_output=full_output)


# ---------------------------------------------------------------------------
# general data


def _initial_terms(data, x, t, tol, angle):
    """int_R e^{..} u0_hat(lam) - int_gamma e^{..} u0_hat(-lam) (times 1, not 1/2pi)."""
    if data.u0 is None and data.u0_hat is None:
        return 0j
    bound = data.decay_constant / data.decay_rate
    real_line = SpectralIntegrand(
        exponent=lambda lam: 1j * lam * x - lam * lam * t,
        amplitude=lambda lam: _u0_transform(lam, data, tol),
        growth=0.0, scale=bound)
    reflected = SpectralIntegrand(
        exponent=lambda lam: 1j * lam * x - lam * lam * t,
        amplitude=lambda lam: _u0_transform(-lam, data, tol),
        growth=0.0, scale=bound)
    a = integrate(_line(0.0, "R"), real_line, tol)
    b = integrate(make_heat_gamma(angle), reflected, tol)
    return a.value - b.value


def _boundary_term(data, x, t, tol, angle):
    """-2i int_gamma e^{i lam x} lam [e^{-lam^2 t} g0_tilde(lam^2, t)] dlam."""
    if data.g0 is None:
        return 0j
    scale = float(np.max(np.abs(data.g0_value(np.linspace(0.0, t, 33))))) * 2.0 + 1e-300
    integrand = SpectralIntegrand(
        exponent=lambda lam: 1j * lam * x,
        amplitude=lambda lam: lam * damped_g0(lam * lam, t, data, tol * 1e-2),
        growth=0.0, scale=scale * max(1.0, t))
    return -2j * integrate(make_heat_gamma(angle), integrand, tol).value


def _duhamel(data, x, t, tol, angle):
    """Forcing terms as int_0^t (initial terms for f(., tau) at time t - tau) dtau."""
    if data.f is None and data.f_hat is None:
        return 0j
    inner = tol / max(1.0, t)
    return duhamel(lambda tau: _initial_terms(data.forcing_slice(tau), x, t - tau, inner, angle),
                   t, tol)


def solve_heat(data, x, t, tol=DEFAULT_TOL, *, angle=DEFAULT_ANGLE, t_min=T_MIN,
               full_output=False):
    """Solution of U_t - U_xx = f, U(x, 0) = u0, U(0, t) = g0 at one point."""
    p = HeatPoint(x, t)
    if p.t < t_min:
        raise ConditioningError(
            f"t = {p.t:g} < t_min = {t_min:g}: the Gaussian envelope exp(-lam^2 t) "
            "is too wide for reliable truncation")
    if not isinstance(data, HalfLineData):
        raise TypeError("data must be HalfLineData")
    # five terms share the tolerance; 2 pi U is accumulated
    part_tol = 2 * math.pi * tol / 5
    total = (_initial_terms(data, p.x, p.t, part_tol, angle)
             + _boundary_term(data, p.x, p.t, part_tol, angle)
             + _duhamel(data, p.x, p.t, part_tol, angle))
    value = total / (2 * math.pi)
    if full_output:
        return value.real, value
    return value.real
