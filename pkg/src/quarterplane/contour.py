"""Oriented paths in the complex spectral plane and quadrature along them.

A :class:`ComplexPath` is an ordered list of :class:`PathSegment` objects,
each either a finite segment or a ray going to (or coming from) infinity.
:func:`integrate` evaluates

    int_path exp(E(lam)) * A(lam) dlam

for a :class:`SpectralIntegrand` with exponent ``E`` and amplitude ``A``.
Rays are truncated explicitly at a radius where the exponential envelope
has dropped below a fraction of the tolerance; every truncated piece is
then handled by a vectorised adaptive Gauss-Kronrod (7, 15) rule.

All paths produced here run "left to right": in along the left ray, out
along the right ray.  This is the positive orientation of the sector
boundaries used by the solution formulas (interior on the left).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = [
    "QuadratureError",
    "DecayError",
    "PoleOnPathError",
    "PathSegment",
    "ComplexPath",
    "SpectralIntegrand",
    "QuadratureOutcome",
    "gauss_kronrod",
    "integrate",
    "make_heat_gamma",
    "make_heat_gamma0",
    "make_kdv_Gamma",
    "make_horizontal_line",
    "make_polyline",
    "in_heat_sector",
    "in_kdv_sector",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-10

# Global sign of the path constructors.  Fixed by comparing the heat
# boundary-step integral with erfc at (x, t) = (1, 1); see tests/test_contour.py.
ORIENTATION = 1


class QuadratureError(RuntimeError):
    """Raised when a contour integral cannot be evaluated to tolerance."""


class DecayError(QuadratureError):
    """The integrand does not decay along a ray for the requested parameters."""


class PoleOnPathError(QuadratureError):
    """A declared pole of the integrand lies on the integration path."""


# Gauss-Kronrod (7, 15) abscissae and weights on [-1, 1] (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-point node set and matching weights
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KWEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GWEIGHTS = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes (1, 3, 5, 7 in _XGK)
for _i, _w in zip((1, 3, 5), _WG[:3]):
    _GWEIGHTS[_i] = _w
    _GWEIGHTS[14 - _i] = _w
_GWEIGHTS[7] = _WG[3]


def gauss_kronrod(func, a, b, tol, *, initial_pieces=1, max_evaluations=4_000_000):
    """Adaptive Gauss-Kronrod integration of a vectorised function on [a, b].

    ``func`` receives a 1-d float array of abscissae and must return an
    array (real or complex) of the same length.  The error criterion is
    global: while the summed |K15 - G7| estimate exceeds ``tol``, every
    interval holding more than a uniform share of it is bisected.
    Intervals whose estimate is at the rounding level of their own
    contribution are frozen.

    Returns ``(value, error_estimate, evaluations, converged)``.
    """
    a = float(a)
    b = float(b)
    if b == a:
        return 0.0, 0.0, 0, True
    edges = np.linspace(a, b, max(1, int(initial_pieces)) + 1)
    lo, hi = edges[:-1], edges[1:]
    kron = np.zeros(0, dtype=complex)
    err = np.zeros(0)
    frozen = np.zeros(0, dtype=bool)
    new_lo, new_hi = lo, hi
    lo = hi = np.zeros(0)
    evaluations = 0
    eps = np.finfo(float).eps
    while True:
        half = 0.5 * (new_hi - new_lo)
        mid = 0.5 * (new_hi + new_lo)
        pts = mid[:, None] + half[:, None] * _NODES[None, :]
        vals = np.asarray(func(pts.ravel())).reshape(pts.shape)
        evaluations += vals.size
        if not np.all(np.isfinite(vals)):
            raise QuadratureError("integrand returned non-finite values")
        k = half * (vals @ _KWEIGHTS)
        e = np.abs(k - half * (vals @ _GWEIGHTS))
        rounding = 50 * eps * half * (np.abs(vals) @ _KWEIGHTS)
        tiny = half <= 32 * eps * np.maximum(np.abs(mid), 1.0)
        lo, hi = np.concatenate([lo, new_lo]), np.concatenate([hi, new_hi])
        kron = np.concatenate([kron, k])
        err = np.concatenate([err, e])
        frozen = np.concatenate([frozen, (e <= rounding) | tiny])
        total_err = err.sum()
        if total_err <= tol:
            return kron.sum(), total_err, evaluations, True
        split = (err > tol / (4 * err.size)) & ~frozen
        if not split.any():
            # rounding-limited everywhere
            return kron.sum(), total_err, evaluations, False
        if evaluations + 30 * int(split.sum()) > max_evaluations:
            return kron.sum(), total_err, evaluations, False
        m = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate([lo[split], m])
        new_hi = np.concatenate([m, hi[split]])
        keep = ~split
        lo, hi, kron, err, frozen = lo[keep], hi[keep], kron[keep], err[keep], frozen[keep]


@dataclass(frozen=True)
class PathSegment:
    """One piece of a path: a finite segment ``start -> end`` or a ray.

    A ray is ``anchor + s * direction`` for s >= 0; ``sense`` says whether
    it is traversed away from the anchor ("outgoing") or towards it
    ("incoming").
    """

    kind: str
    start: complex
    end: Optional[complex] = None
    direction: Optional[complex] = None
    sense: str = "outgoing"

    def __post_init__(self):
        if self.kind == "segment":
            if self.end is None or abs(self.end - self.start) == 0:
                raise ValueError("finite segment needs distinct endpoints")
        elif self.kind == "ray":
            if self.direction is None or abs(abs(self.direction) - 1.0) > 1e-14:
                raise ValueError("ray direction must have modulus 1")
            if self.sense not in ("outgoing", "incoming"):
                raise ValueError(f"unknown sense {self.sense!r}")
        else:
            raise ValueError(f"unknown segment kind {self.kind!r}")

    @classmethod
    def segment(cls, a, b):
        return cls("segment", complex(a), end=complex(b))

    @classmethod
    def ray(cls, anchor, direction, sense="outgoing"):
        d = complex(direction)
        return cls("ray", complex(anchor), direction=d / abs(d), sense=sense)

    @property
    def is_ray(self):
        return self.kind == "ray"

    @property
    def unit(self):
        """Unit tangent of the parameterisation s -> point(s)."""
        if self.is_ray:
            return self.direction
        return (self.end - self.start) / abs(self.end - self.start)

    @property
    def length(self):
        return math.inf if self.is_ray else abs(self.end - self.start)

    @property
    def sign(self):
        """+1 if traversed with increasing s, -1 otherwise."""
        return -1 if (self.is_ray and self.sense == "incoming") else 1

    def point(self, s):
        return self.start + np.asarray(s) * self.unit

    @property
    def head(self):
        """Finite point where traversal begins (None for an incoming ray)."""
        if self.is_ray:
            return None if self.sense == "incoming" else self.start
        return self.start

    @property
    def tail(self):
        """Finite point where traversal ends (None for an outgoing ray)."""
        if self.is_ray:
            return self.start if self.sense == "incoming" else None
        return self.end

    def distance_to(self, z):
        z = complex(z)
        proj = ((z - self.start) * self.unit.conjugate()).real
        proj = max(proj, 0.0)
        if not self.is_ray:
            proj = min(proj, self.length)
        return abs(z - (self.start + proj * self.unit))

    def reversed(self):
        if self.is_ray:
            other = "incoming" if self.sense == "outgoing" else "outgoing"
            return PathSegment("ray", self.start, direction=self.direction, sense=other)
        return PathSegment.segment(self.end, self.start)


@dataclass(frozen=True)
class ComplexPath:
    """Ordered, connected sequence of path segments."""

    segments: tuple
    name: str = ""

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs:
            raise ValueError("a path needs at least one segment")
        for left, right in zip(segs[:-1], segs[1:]):
            if left.tail is None or right.head is None:
                raise ValueError("path passes through infinity between segments")
            if abs(left.tail - right.head) > 1e-12 * max(1.0, abs(left.tail)):
                raise ValueError(
                    f"segments do not connect: {left.tail} vs {right.head}")

    def __len__(self):
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def reversed(self):
        return ComplexPath(tuple(s.reversed() for s in reversed(self.segments)),
                           self.name + "^-1")

    def distance_to(self, z):
        return min(seg.distance_to(z) for seg in self.segments)


@dataclass(frozen=True)
class SpectralIntegrand:
    """lam -> exp(exponent(lam)) * amplitude(lam), with pole metadata.

    ``exponent`` carries all exponential factors (e.g. i*lam*x - w(lam)*t)
    and is combined before exponentiation so huge and tiny factors never
    meet in floating point.  ``growth`` bounds the algebraic growth of the
    amplitude, |A(lam)| <= C (1 + |lam|)**growth; it feeds the truncation
    envelope.
    """

    exponent: Callable
    amplitude: Optional[Callable] = None
    poles: tuple = ()
    growth: float = 0.0
    scale: Optional[float] = None

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=complex)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            vals = np.exp(self.exponent(lam))
            if self.amplitude is not None:
                amp = self.amplitude(lam)
                # exp underflows to 0 where amp may be inf/nan far out on rays
                vals = np.where(vals == 0, 0.0, vals * amp)
        return vals

    def log_envelope(self, lam, scale):
        lam = np.asarray(lam, dtype=complex)
        return (np.real(self.exponent(lam))
                + self.growth * np.log1p(np.abs(lam)) + math.log(scale))


@dataclass(frozen=True)
class QuadratureOutcome:
    value: complex
    abs_error_estimate: float
    evaluations: int
    truncation_radius: tuple = field(default_factory=tuple)
    converged: bool = True


_PROBE_S = np.concatenate([[0.0], np.geomspace(1e-2, 1e8, 400)])


def _amplitude_scale(integrand, seg):
    if integrand.scale is not None:
        return float(integrand.scale)
    if integrand.amplitude is None:
        return 1.0
    s = np.array([0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 100.0])
    lam = seg.point(s)
    amp = np.abs(np.asarray(integrand.amplitude(lam), dtype=complex))
    amp = amp[np.isfinite(amp)]
    bound = amp / (1.0 + np.abs(lam[: amp.size])) ** integrand.growth if amp.size else [1.0]
    return max(2.0 * float(np.max(bound)), 1e-300)


def truncation_radius(seg, integrand, threshold):
    """Smallest probe radius beyond which envelope * max(s, 1) < threshold."""
    scale = _amplitude_scale(integrand, seg)
    lam = seg.point(_PROBE_S)
    with np.errstate(over="ignore", invalid="ignore"):
        logenv = integrand.log_envelope(lam, scale) + np.log(np.maximum(_PROBE_S, 1.0))
    bad = ~(logenv < math.log(threshold))
    if bad[-1]:
        raise DecayError(
            f"integrand does not decay along ray from {seg.start} "
            f"in direction {seg.direction}")
    last_bad = np.nonzero(bad)[0]
    if last_bad.size == 0:
        return float(_PROBE_S[1])
    return float(_PROBE_S[last_bad[-1] + 1])


def integrate(path, integrand, tol=DEFAULT_TOL, *, strict=True,
              max_evaluations=4_000_000, pole_clearance=1e-9):
    """Integrate ``integrand`` along ``path``.

    The tolerance is split evenly between segments; one tenth of it is
    reserved for ray truncation.  Raises :class:`PoleOnPathError` if a
    declared pole touches the path, :class:`DecayError` if a ray has no
    decaying envelope, and :class:`QuadratureError` if adaptive refinement
    runs out of budget (unless ``strict=False``).
    """
    if not callable(integrand):
        raise TypeError("integrand must be callable")
    if not isinstance(integrand, SpectralIntegrand):
        integrand = SpectralIntegrand(exponent=lambda lam: np.zeros_like(lam),
                                      amplitude=integrand)
    for pole in integrand.poles:
        if path.distance_to(pole) <= pole_clearance:
            raise PoleOnPathError(f"pole {pole} lies on path {path.name!r}")
    nseg = len(path)
    quad_tol = 0.9 * tol / nseg
    trunc_tol = 0.1 * tol / nseg
    total = 0j
    err_total = 0.0
    evals = 0
    radii = []
    converged = True
    budget = max_evaluations // nseg
    for seg in path:
        if seg.is_ray:
            R = truncation_radius(seg, integrand, trunc_tol)
            radii.append(R)
            pieces = 8
        else:
            R = seg.length
            radii.append(None)
            pieces = 2

        def f(s, seg=seg):
            return integrand(seg.point(s)) * seg.unit

        val, err, n, ok = gauss_kronrod(f, 0.0, R, quad_tol, initial_pieces=pieces,
                                        max_evaluations=budget)
        total += seg.sign * val
        err_total += err + (trunc_tol if seg.is_ray else 0.0)
        evals += n
        converged &= ok
    outcome = QuadratureOutcome(complex(total) * ORIENTATION, float(err_total), evals,
                                tuple(radii), bool(converged and err_total <= tol))
    if strict and not outcome.converged:
        raise QuadratureError(
            f"contour integral along {path.name!r} did not reach tol={tol:g} "
            f"(estimate {err_total:.3g} after {evals} evaluations)")
    return outcome


# ---------------------------------------------------------------------------
# path constructors

def _sector_path(left_angle, right_angle, name):
    left = PathSegment.ray(0.0, np.exp(1j * left_angle), sense="incoming")
    right = PathSegment.ray(0.0, np.exp(1j * right_angle), sense="outgoing")
    return ComplexPath((left, right), name)


def make_heat_gamma(angle=math.pi / 4):
    """Boundary of the heat sector {Im lam >= 0, Re lam^2 <= 0}.

    With the default ``angle`` this is the exact sector boundary: in along
    arg = 3pi/4, out along arg = pi/4.  A smaller angle in (0, pi/4] gives
    the rotated rays arg = pi - angle and arg = angle; integrands whose
    factor exp(-lam^2 t) decays between the two are unchanged by the
    rotation and lose their chirp oscillation along the rays.
    """
    if not 0 < angle <= math.pi / 4 + 1e-15:
        raise ValueError("angle must lie in (0, pi/4]")
    return _sector_path(math.pi - angle, angle, "gamma")


def make_heat_gamma0(angle=math.pi / 4, height=1.0):
    """``gamma`` with its part inside |Im lam| < height replaced by a segment.

    Defaults give the rays of ``gamma`` restricted to |lam| >= sqrt(2)
    joined by the segment [-1 + i, 1 + i]; the path stays at distance
    ``height`` from the origin.
    """
    if not 0 < angle <= math.pi / 4 + 1e-15:
        raise ValueError("angle must lie in (0, pi/4]")
    if height <= 0:
        raise ValueError("height must be positive")
    reach = height / math.tan(angle)
    a = complex(-reach, height)
    b = complex(reach, height)
    left = PathSegment.ray(a, np.exp(1j * (math.pi - angle)), sense="incoming")
    mid = PathSegment.segment(a, b)
    right = PathSegment.ray(b, np.exp(1j * angle), sense="outgoing")
    return ComplexPath((left, mid, right), "gamma0")


def make_kdv_Gamma(angle=math.pi / 3):
    """Boundary of {Im lam >= 0, Re(-i lam^3) <= 0}: rays at 2pi/3 (in) and pi/3 (out).

    ``angle`` in [pi/6, pi/3] rotates the rays to arg = angle and
    arg = pi - angle, towards the sectors where exp(i lam^3 t) decays.
    """
    if not math.pi / 6 - 1e-15 <= angle <= math.pi / 3 + 1e-15:
        raise ValueError("angle must lie in [pi/6, pi/3]")
    return _sector_path(math.pi - angle, angle, "Gamma")


def make_horizontal_line(eps):
    """The line Im lam = eps traversed from Re lam = -inf to +inf."""
    eps = float(eps)
    if not eps > 0:
        raise ValueError("eps must be positive")
    anchor = complex(0.0, eps)
    left = PathSegment.ray(anchor, -1.0, sense="incoming")
    right = PathSegment.ray(anchor, 1.0, sense="outgoing")
    return ComplexPath((left, right), f"horiz({eps:g})")


def make_polyline(points, name="polyline", head_direction=None, tail_direction=None):
    """Path through finite ``points`` with optional rays attached at both ends.

    ``head_direction`` is the direction *from* the first point towards
    infinity (the ray is traversed inwards); ``tail_direction`` points from
    the last point to infinity.
    """
    pts = [complex(p) for p in points]
    segs = []
    if head_direction is not None:
        segs.append(PathSegment.ray(pts[0], head_direction, sense="incoming"))
    segs.extend(PathSegment.segment(p, q) for p, q in zip(pts[:-1], pts[1:]))
    if tail_direction is not None:
        segs.append(PathSegment.ray(pts[-1], tail_direction, sense="outgoing"))
    return ComplexPath(tuple(segs), name)


def in_heat_sector(lam):
    lam = complex(lam)
    return lam.imag >= 0 and (lam * lam).real <= 0


def in_kdv_sector(lam):
    lam = complex(lam)
    return lam.imag >= 0 and (-1j * lam ** 3).real <= 0
