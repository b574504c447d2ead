"""Linear KdV, U_t + U_xxx = f, on the quarter plane x > 0, t > 0.

With w(lam) = -i lam^3 and alpha = exp(2 pi i / 3) the solution is

    2 pi U = J0+ u0 + J0- u0 - J1 g0 + J2+ f + J2- f

    J0+ = int_R     e^{i lam x - w t} u0_hat(lam) dlam
    J0- = int_Gamma e^{i lam x - w t} [alpha u0_hat(alpha lam) + alpha^2 u0_hat(alpha^2 lam)] dlam
    J1  = int_Gamma e^{i lam x - w t} 3 lam^2 g0_tilde(w, t) dlam

and J2+, J2- are J0+, J0- with u0_hat replaced by f_tilde.  ``Gamma`` is
the boundary of {Im lam >= 0, Re w <= 0}: in along arg = 2pi/3, out along
arg = pi/3.

Evaluation strategy (``contour="deformed"``, the default):

* J0+ runs over the "tent" -inf + ic -> -c sqrt(3) + ic -> 0 -> c sqrt(3) + ic
  -> +inf + ic with 0 < c < decay_rate, so u0_hat is only needed in its
  strip of analyticity and exp(i lam^3 t) decays on every piece.
* J0- is split in its two rotated terms; mu = alpha lam (resp. alpha^2 lam)
  maps them to integrals of u0_hat(mu) itself, whose paths are then swung
  into the sectors where all exponentials decay.  u0_hat is never
  continued analytically.
* J1 is written as g0(t) times the boundary-step solution plus a remainder
  whose kernel int_0^t e^{-ws} (g0(t - s) - g0(t)) ds is O(w^-2); the
  remainder runs over Gamma rotated to arg = pi/6, 5pi/6 where w is real.
* J2+ and J2- use the same three paths as the J0 terms, with the damped
  kernel exp(-w t) f_tilde(lam, w, t) = int_0^t e^{-ws} f_hat(lam, t - s) ds
  in place of u0_hat (Re w >= 0 there, so it stays bounded).  Both
  contour modes share this evaluation.

``contour="literal"`` evaluates J0- and J1 on Gamma itself with the
rotated transforms and the full damped kernel (decay comes from
exp(i lam x) alone, so x should not be small).
"""

import math
from dataclasses import dataclass

import numpy as np

from .contour import (
    DEFAULT_TOL,
    SpectralIntegrand,
    integrate,
    make_horizontal_line,
    make_kdv_Gamma,
    make_polyline,
)
from .transforms import (
    KDV,
    HalfLineData,
    _u0_transform,
    damped_f,
    damped_g0,
    hat_u0,
    laplace_rows,
)

__all__ = [
    "ALPHA",
    "KdvConstants",
    "KdvPoint",
    "auto_eps",
    "example2_v",
    "example2_u",
    "kdv_un",
    "rotation_sum",
    "solve_kdv",
    "N_CAP",
]

ALPHA = complex(-0.5, math.sqrt(3.0) / 2.0)
N_CAP = 6
_SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class KdvConstants:
    alpha: complex = ALPHA
    omega: object = KDV
    eps_default: float = 1.0

    def residuals(self):
        """Deviations of alpha^3 = 1, 1 + alpha + alpha^2 = 0 and w(alpha lam) = w(lam)."""
        a = self.alpha
        probes = np.array([0.3 + 0.7j, -1.2 + 0.1j, 2.0 - 0.5j])
        sym = np.max(np.abs(self.omega(a * probes) - self.omega(probes)) / np.abs(probes) ** 3)
        return {"alpha_cubed": abs(a ** 3 - 1), "root_sum": abs(1 + a + a * a),
                "symmetry": float(sym)}


@dataclass(frozen=True)
class KdvPoint:
    x: float
    t: float

    def __post_init__(self):
        if not (self.x > 0 and self.t > 0):
            raise ValueError(f"point must satisfy x > 0, t > 0, got ({self.x}, {self.t})")


def auto_eps(x, t):
    """Height of the line through the saddle of i lam x + i lam^3 t.

    sqrt(x / 3t), floored at half the natural scale (3t)^(-1/3) so that
    exp(t eps^3) never amplifies the integrand.
    """
    s = (3.0 * t) ** (-1.0 / 3.0)
    return max(math.sqrt(x / (3.0 * t)), 0.5 * s)


def _scaled_line(p, eps):
    """Line in mu = (3t)^(1/3) lam and the scaled abscissa xi."""
    s = (3.0 * p.t) ** (1.0 / 3.0)
    if eps is None:
        eps = auto_eps(p.x, p.t)
    eps = float(eps)
    if not eps > 0:
        raise ValueError("eps must be positive")
    return make_horizontal_line(eps * s), p.x / s


def _finish(value, outcome, full_output):
    if full_output:
        return value.real, value, outcome
    return value.real


def example2_v(x, t, eps=None, tol=DEFAULT_TOL, *, full_output=False):
    """Boundary-step solution (v(0, t) = 1, v(x, 0) = 0) of v_t + v_xxx = 0.

        v = -(3 / 2 pi i) int_{Im lam = eps} e^{i lam x + i lam^3 t} dlam / lam

    The integral is computed in the scale-free variable mu = (3t)^(1/3) lam,
    where it reads int e^{i mu xi + i mu^3 / 3} dmu / mu.  ``eps=None``
    picks :func:`auto_eps`; any eps > 0 gives the same value.
    """
    p = KdvPoint(x, t)
    line, xi = _scaled_line(p, eps)
    height = line.segments[0].start.imag
    integrand = SpectralIntegrand(
        exponent=lambda mu: 1j * mu * xi + 1j * mu ** 3 / 3.0,
        amplitude=lambda mu: 1.0 / mu,
        poles=(0j,), growth=-1.0, scale=1.0 / height)
    out = integrate(line, integrand, tol * 2 * math.pi / 3)
    return _finish(out.value * 3j / (2 * math.pi), out, full_output)


def _check_n(n, cap):
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    if n > cap:
        raise ValueError(f"n = {n} exceeds the cap {cap}")
    return int(n)


def kdv_un(n, x, t, eps=None, tol=DEFAULT_TOL, *, cap=N_CAP, full_output=False):
    """Three times the n-th time derivative of the boundary-step solution.

        u_n = -(9 / 2 pi) int_{Im lam = eps} (i lam^3)^(n-1) lam^2 e^{i lam x + i lam^3 t} dlam

    Evaluated in mu = (3t)^(1/3) lam, which pulls out the natural size
    (3t)^(-n).  ``tol`` is relative to that size times the peak modulus
    of the scaled integrand on the line (at least 1): the peak grows
    like (3n)^(3n/2) e^(-3n/2) and sets the rounding floor.
    """
    n = _check_n(n, cap)
    p = KdvPoint(x, t)
    line, xi = _scaled_line(p, eps)
    integrand = SpectralIntegrand(
        exponent=lambda mu: 1j * mu * xi + 1j * mu ** 3 / 3.0,
        amplitude=lambda mu: (1j * mu ** 3) ** (n - 1) * mu * mu,
        growth=3 * n - 1, scale=1.0)
    reach = 3.0 * math.sqrt(3 * n) + 3.0
    probe = np.linspace(-reach, reach, 801) + 1j * line.segments[0].start.imag
    peak = float(np.max(np.abs(integrand(probe))))
    out = integrate(line, integrand, tol * 2 * math.pi / 9 * max(1.0, peak))
    value = out.value * (-9.0 / (2 * math.pi)) * (3.0 * p.t) ** -n
    return _finish(value, out, full_output)


def example2_u(x, t, eps=None, tol=DEFAULT_TOL, *, full_output=False):
    """3 dv/dt for v = :func:`example2_v` (n = 1 of :func:`kdv_un`).

    The prefactor -9 / 2 pi carries the factor 3; any constant multiple of
    a zero-data solution is again one.
    """
    return kdv_un(1, x, t, eps, tol, full_output=full_output)


# ---------------------------------------------------------------------------
# general data


def rotation_sum(lam, data, tol=DEFAULT_TOL):
    """alpha u0_hat(alpha lam) + alpha^2 u0_hat(alpha^2 lam).

    Both rotated arguments must lie in Im <= 0 (up to 1e-12), which holds
    on Gamma; anything else is rejected rather than continued.
    """
    lam = np.asarray(lam, dtype=complex)
    a = ALPHA
    return a * hat_u0(a * lam, data, tol) + a * a * hat_u0(a * a * lam, data, tol)


def _strip_height(data):
    return min(0.5 * data.decay_rate, 1.0)


def _tent(c):
    k = c * _SQRT3
    return make_polyline([complex(-k, c), 0j, complex(k, c)], "tent",
                         head_direction=-1.0, tail_direction=1.0)


def _left_leg(c):
    # -i inf -> 0 -> -c sqrt(3) + ic -> -inf + ic
    return make_polyline([0j, complex(-c * _SQRT3, c)], "C1",
                         head_direction=-1j, tail_direction=-1.0)


def _right_leg(c):
    # +inf + ic -> c sqrt(3) + ic -> 0 -> -i inf
    return make_polyline([complex(c * _SQRT3, c), 0j], "C2",
                         head_direction=1.0, tail_direction=-1j)


def _initial_terms(data, x, t, tol, contour):
    """J0+ u0 + J0- u0."""
    if data.u0 is None and data.u0_hat is None:
        return 0j
    c = _strip_height(data)
    bound = data.decay_constant / (data.decay_rate - c)

    def amp(lam):
        return _u0_transform(lam, data, tol)

    def piece(path, rot):
        integrand = SpectralIntegrand(
            exponent=lambda mu: 1j * rot * mu * x + 1j * mu ** 3 * t,
            amplitude=amp, growth=0.0, scale=bound)
        return integrate(path, integrand, tol).value

    plus = piece(_tent(c), 1.0)
    if contour == "literal":
        integrand = SpectralIntegrand(
            exponent=lambda lam: 1j * lam * x + 1j * lam ** 3 * t,
            amplitude=lambda lam: rotation_sum(lam, data, tol),
            growth=0.0, scale=2 * data.decay_constant / data.decay_rate)
        return plus + integrate(make_kdv_Gamma(), integrand, tol).value
    # mu = alpha lam turns alpha u0_hat(alpha lam) into u0_hat(mu) with x -> alpha^2 x
    return plus + piece(_left_leg(c), ALPHA * ALPHA) + piece(_right_leg(c), ALPHA)


def _boundary_remainder(w, t, data, tol):
    """int_0^t e^{-w s} (g0(t - s) - g0(t)) ds for Re w >= 0."""
    w = np.asarray(w, dtype=complex)
    g0 = data.g0
    gt = float(data.g0_value(t))
    flat = w.ravel()
    cut = math.log(1e3 / tol)
    upper = np.minimum(t, cut / np.maximum(flat.real, 1e-300))
    out = laplace_rows(flat, upper, lambda rows, S: g0(t - S) - gt, tol)
    return out.reshape(w.shape)


def _boundary_term(data, x, t, tol, contour):
    """-J1 g0, the boundary contribution to 2 pi U."""
    if data.g0 is None:
        return 0j
    if contour == "literal":
        scale = float(np.max(np.abs(data.g0_value(np.linspace(0.0, t, 33))))) * t + 1e-300
        integrand = SpectralIntegrand(
            exponent=lambda lam: 1j * lam * x,
            amplitude=lambda lam: 3 * lam * lam * damped_g0(-1j * lam ** 3, t, data, tol * 1e-2),
            growth=2.0, scale=3 * scale)
        return -integrate(make_kdv_Gamma(), integrand, tol).value
    gt = float(data.g0_value(t))
    step = 0j
    if gt != 0.0:
        step = 2 * math.pi * gt * example2_v(x, t, tol=0.5 * tol / (2 * math.pi * abs(gt)))
    if data.g0_constant is not None:
        return step
    # |g0(t - s) - g0(t)| <= L s, so the kernel is below L / w^2 = L r^-6
    ts = np.linspace(0.0, t, 65)
    slope = float(np.max(np.abs(np.diff(data.g0_value(ts))))) / (ts[1] - ts[0])
    integrand = SpectralIntegrand(
        exponent=lambda lam: 1j * lam * x,
        amplitude=lambda lam: 3 * lam * lam * _boundary_remainder(-1j * lam ** 3, t, data,
                                                                  tol * 1e-2),
        growth=-4.0, scale=3 * max(slope, 1e-300) * (1 + t) ** 2)
    rest = integrate(make_kdv_Gamma(math.pi / 6), integrand, 0.5 * tol).value
    return step - rest


def _forcing_terms(data, x, t, tol, contour):
    """J2+ f + J2- f with the damped kernel exp(-w t) f_tilde(lam, w, t).

    Re w >= 0 on the tent and on both legs, so the kernel is bounded there
    and decays like f_hat / w; the split form keeps the quadrature part
    O(w^-2) so only the explicit t exprel(-w t) f_hat(lam, t) term
    reaches far along the horizontal tails.
    """
    if data.f is None and data.f_hat is None:
        return 0j
    c = _strip_height(data)

    def piece(path, rot):
        integrand = SpectralIntegrand(
            exponent=lambda mu: 1j * rot * mu * x,
            amplitude=lambda mu: damped_f(mu, -1j * mu ** 3, t, data, tol * 1e-2, split=True),
            growth=-4.0)
        return integrate(path, integrand, tol).value

    return piece(_tent(c), 1.0) + piece(_left_leg(c), ALPHA * ALPHA) + piece(_right_leg(c), ALPHA)


def solve_kdv(data, x, t, tol=DEFAULT_TOL, *, contour="deformed", full_output=False):
    """Solution of U_t + U_xxx = f, U(x, 0) = u0, U(0, t) = g0 at one point."""
    p = KdvPoint(x, t)
    if not isinstance(data, HalfLineData):
        raise TypeError("data must be HalfLineData")
    if contour not in ("deformed", "literal"):
        raise ValueError(f"unknown contour {contour!r}")
    part_tol = 2 * math.pi * tol / 5
    total = (_initial_terms(data, p.x, p.t, part_tol, contour)
             + _boundary_term(data, p.x, p.t, part_tol, contour)
             + _forcing_terms(data, p.x, p.t, part_tol, contour))
    value = total / (2 * math.pi)
    if full_output:
        return value.real, value
    return value.real
