"""Half-line transforms of initial, boundary and forcing data.

    u0_hat(lam)        = int_0^inf exp(-i lam y) u0(y) dy          (Im lam <= 0)
    g0_tilde(w, t)     = int_0^t   exp(w tau) g0(tau) dtau
    f_hat(lam, tau)    = int_0^inf exp(-i lam y) f(y, tau) dy      (Im lam <= 0)
    f_tilde(lam, w, t) = int_0^t   exp(w tau) f_hat(lam, tau) dtau

The solvers never multiply ``exp(-w t)`` into ``g0_tilde`` after the fact;
they call the *damped* forms ``damped_g0(w, t) = exp(-w t) g0_tilde(w, t)``
which are integrated directly and stay bounded when Re w >= 0.

Quadrature here is composite Gauss-Legendre, vectorised over many spectral
points at once, with panel doubling until two successive levels agree.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .contour import DEFAULT_TOL, QuadratureError, gauss_kronrod

__all__ = [
    "HalfLineData",
    "DispersionRelation",
    "HEAT",
    "KDV",
    "DecayDeclarationWarning",
    "hat_u0",
    "tilde_g0",
    "hat_f",
    "tilde_f",
    "damped_g0",
    "damped_f",
    "exprel",
    "check_decay_declaration",
    "duhamel",
]


class DecayDeclarationWarning(UserWarning):
    """Data exceed their declared exponential envelope at the truncation point."""


@dataclass(frozen=True)
class DispersionRelation:
    """Polynomial w(lam) = sum_k coeffs[k] lam**k."""

    name: str
    coeffs: tuple

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=complex)
        out = np.zeros_like(lam)
        for c in reversed(self.coeffs):
            out = out * lam + c
        return out

    @property
    def degree(self):
        return len(self.coeffs) - 1


HEAT = DispersionRelation("heat", (0, 0, 1))
KDV = DispersionRelation("kdv", (0, 0, 0, -1j))


def _as_vectorised(func, nargs):
    """Wrap a scalar callable so it accepts numpy arrays."""
    if func is None:
        return None
    probe = np.array([0.25, 0.5])
    try:
        out = func(*([probe] * nargs))
        if np.shape(out) == probe.shape:
            return func
        if np.ndim(out) == 0:
            return lambda *a: np.full(np.broadcast(*a).shape, float(out))
    except Exception:
        pass
    return np.vectorize(func, otypes=[float])


@dataclass(frozen=True)
class HalfLineData:
    """Initial datum u0(x), boundary datum g0(t) and forcing f(x, t).

    ``None`` for any of ``u0``, ``g0``, ``f`` means identically zero.
    ``decay_rate`` (delta) and ``decay_constant`` (C) declare
    |u0(x)|, |f(x, t)| <= C exp(-delta x); the half-line transforms are
    truncated from this declaration.

    ``u0_derivatives`` lists callables for u0', u0'', u0''' and
    ``g0_derivatives`` for g0'; the corner compatibility checks need them.
    ``g0_constant`` enables the exact g0_tilde shortcut; ``u0_hat`` and
    ``f_hat`` are optional closed-form (analytically continued) transforms.
    """

    u0: Optional[Callable] = None
    g0: Optional[Callable] = None
    f: Optional[Callable] = None
    decay_rate: float = 1.0
    decay_constant: float = 1.0
    u0_derivatives: tuple = ()
    g0_derivatives: tuple = ()
    g0_constant: Optional[float] = None
    u0_hat: Optional[Callable] = None
    f_hat: Optional[Callable] = None
    name: str = "custom"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.decay_rate > 0:
            raise ValueError("decay_rate must be positive")
        if self.g0_constant is not None:
            c = float(self.g0_constant)
            object.__setattr__(self, "g0_constant", c)
            if self.g0 is None:
                object.__setattr__(self, "g0", lambda t, c=c: np.full(np.shape(t), c))
            if not self.g0_derivatives:
                object.__setattr__(self, "g0_derivatives",
                                   (lambda t: np.zeros(np.shape(t)),))
        object.__setattr__(self, "u0", _as_vectorised(self.u0, 1))
        object.__setattr__(self, "g0", _as_vectorised(self.g0, 1))
        object.__setattr__(self, "f", _as_vectorised(self.f, 2))

    # -- convenience constructors -------------------------------------
    @classmethod
    def zero(cls):
        return cls(name="zero", u0_derivatives=(_zero1,) * 3, g0_derivatives=(_zero1,),
                   g0_constant=None)

    @classmethod
    def step(cls, level=1.0):
        """u0 = 0, g0 = level, f = 0: the boundary-step datum."""
        return cls(g0_constant=level, u0_derivatives=(_zero1,) * 3, name="step")

    # -- evaluation helpers -------------------------------------------
    def u0_value(self, x):
        x = np.asarray(x, dtype=float)
        return np.zeros_like(x) if self.u0 is None else np.asarray(self.u0(x), dtype=float)

    def g0_value(self, t):
        t = np.asarray(t, dtype=float)
        return np.zeros_like(t) if self.g0 is None else np.asarray(self.g0(t), dtype=float)

    def f_value(self, x, t):
        x, t = np.broadcast_arrays(np.asarray(x, float), np.asarray(t, float))
        return np.zeros(x.shape) if self.f is None else np.asarray(self.f(x, t), dtype=float)

    def forcing_slice(self, tau):
        """f(., tau) as initial-type data, keeping decay metadata."""
        tau = float(tau)
        f = self.f
        f_hat = self.f_hat
        return HalfLineData(
            u0=None if f is None else (lambda y: f(y, np.full(np.shape(y), tau))),
            u0_hat=None if f_hat is None else (lambda lam: f_hat(lam, tau)),
            decay_rate=self.decay_rate, decay_constant=self.decay_constant,
            name=f"{self.name}:f(.,{tau:g})")

    def scaled(self, c):
        """Data multiplied by the constant ``c`` (derivatives and transforms too)."""
        c = float(c)

        def sc(fn):
            return None if fn is None else (lambda *a: c * np.asarray(fn(*a)))

        return replace(
            self, u0=sc(self.u0), g0=sc(self.g0), f=sc(self.f),
            u0_derivatives=tuple(sc(d) for d in self.u0_derivatives),
            g0_derivatives=tuple(sc(d) for d in self.g0_derivatives),
            g0_constant=None if self.g0_constant is None else c * self.g0_constant,
            u0_hat=sc(self.u0_hat), f_hat=sc(self.f_hat),
            decay_constant=abs(c) * self.decay_constant, name=f"{c:g}*{self.name}")


def _zero1(x):
    return np.zeros(np.shape(x))


def exprel(z):
    """(exp(z) - 1) / z, accurate near z = 0, for complex arrays."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-8
    safe = np.where(small, 1.0, z)
    return np.where(small, 1.0 + 0.5 * z, np.expm1(safe) / safe)


# ---------------------------------------------------------------------------
# composite Gauss-Legendre, row-vectorised

_GL_ORDER = 16
_MAX_PANELS = 1 << 15
_CHUNK = 1 << 21


@lru_cache(maxsize=None)
def _panel_rule(panels):
    x, w = np.polynomial.legendre.leggauss(_GL_ORDER)
    offs = np.arange(panels)[:, None]
    nodes = ((offs + 0.5 * (x[None, :] + 1.0)) / panels).ravel()
    weights = np.tile(0.5 * w / panels, panels)
    return nodes, weights


def _rows_at(w, upper, func, idx, panels, columns):
    nodes, weights = _panel_rule(panels)
    out = np.empty((idx.size, columns) if columns else idx.size, dtype=complex)
    step = max(1, _CHUNK // (nodes.size * max(columns, 1)))
    for k in range(0, idx.size, step):
        rows = idx[k:k + step]
        S = upper[rows, None] * nodes[None, :]
        kernel = np.exp(-w[rows, None] * S) * (upper[rows, None] * weights[None, :])
        vals = func(rows, S)
        if columns:
            out[k:k + step] = np.einsum("rn,rnc->rc", kernel, vals)
        else:
            out[k:k + step] = np.einsum("rn,rn->r", kernel, vals)
    return out


def laplace_rows(w, upper, func, tol, *, smooth_scale=1.0, columns=0):
    """Row-wise int_0^{upper_i} exp(-w_i s) func(i, s) ds.

    ``func(rows, S)`` receives an integer index array and a matrix of
    abscissae (one row per index) and returns values of the same shape.
    With ``columns > 0`` it returns an extra trailing axis of that length
    instead, and every column is transformed with the same exponentials.
    Panels are doubled per row until successive results differ by <= tol.
    """
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    upper = np.broadcast_to(np.asarray(upper, dtype=float), w.shape).astype(float)
    shape = w.shape + ((columns,) if columns else ())
    result = np.zeros(shape, dtype=complex)
    live = upper > 0
    est = np.abs(w) * upper / 8.0 + upper / smooth_scale
    panels = np.where(live, 2 ** np.ceil(np.log2(np.maximum(est, 1.0))), 0).astype(np.int64)
    panels = np.minimum(panels, _MAX_PANELS // 2)
    pending = np.nonzero(live)[0]
    last = np.zeros(shape, dtype=complex)
    have_last = np.zeros(w.shape, dtype=bool)
    while pending.size:
        retry = []
        for p in np.unique(panels[pending]):
            rows = pending[panels[pending] == p]
            fresh = rows[~have_last[rows]]
            if fresh.size:
                last[fresh] = _rows_at(w, upper, func, fresh, int(p), columns)
            fine = _rows_at(w, upper, func, rows, int(2 * p), columns)
            diff = np.abs(fine - last[rows])
            good = (diff.max(axis=1) if columns else diff) <= tol
            result[rows] = fine
            last[rows] = fine
            have_last[rows] = True
            bad = rows[~good]
            if bad.size:
                if 4 * p > _MAX_PANELS:
                    raise QuadratureError("transform quadrature did not converge")
                panels[bad] = 2 * p
                retry.append(bad)
        pending = np.concatenate(retry) if retry else np.array([], dtype=np.int64)
    return result


# ---------------------------------------------------------------------------
# transforms


def _half_line_upper(lam, data, tol):
    """Truncation point of int_0^inf exp(-i lam y) u(y) dy from the decay declaration."""
    rate = data.decay_rate + np.maximum(-np.imag(lam), 0.0) - np.maximum(np.imag(lam), 0.0)
    if np.any(rate <= 0):
        raise ValueError("Im lam must stay below the declared decay rate")
    big = math.log(max(data.decay_constant, 1e-300) / (tol * 1e-2) + 1.0)
    return np.maximum(big, 1.0) / rate


def check_decay_declaration(data, tol=DEFAULT_TOL):
    """True if u0 respects C exp(-delta x) at and beyond its truncation point."""
    if data.u0 is None and data.f is None:
        return True
    y0 = float(_half_line_upper(np.array([0j]), data, tol)[0])
    ys = y0 * np.array([1.0, 1.5, 2.0])
    env = data.decay_constant * np.exp(-data.decay_rate * ys) * (1 + 1e-6)
    ok = True
    if data.u0 is not None:
        ok &= bool(np.all(np.abs(data.u0_value(ys)) <= env + 1e-300))
    if data.f is not None:
        for tau in (0.0, 1.0):
            ok &= bool(np.all(np.abs(data.f_value(ys, tau)) <= env + 1e-300))
    return ok


_SERIES_W = 1e4
_SERIES_NODES = 9
_SERIES_DEGREE = 6


@lru_cache(maxsize=None)
def _series_fit(width):
    """Nodes on [0, width] and the map from samples to derivatives 0..3 at 0."""
    k = np.arange(_SERIES_NODES)
    nodes = 0.5 * width * (1.0 - np.cos(np.pi * k / (_SERIES_NODES - 1)))
    V = np.vander(nodes, _SERIES_DEGREE + 1, increasing=True)
    coef = np.linalg.pinv(V)
    # derivative j at 0 is j! times coefficient j
    return nodes, np.array([coef[0], coef[1], 2.0 * coef[2], 6.0 * coef[3]])


_SERIES_LAM = 500.0


def _transform_series(lam, sampler):
    """Large-|lam| half-line transform sum_k u^(k)(0) / (i lam)^(k+1), k <= 3.

    ``sampler(nodes)`` returns samples of u at the fit nodes, one row per
    entry of ``lam``; the truncation error is O(|u^(4)| / |lam|^5).
    """
    nodes, D = _series_fit(0.05)
    derivs = sampler(nodes) @ D.T
    il = 1j * lam
    return sum(derivs[:, k] / il ** (k + 1) for k in range(4))


def _u0_transform(lam, data, tol):
    """u0_hat on the strip Im lam < decay_rate (no half-plane check)."""
    lam = np.asarray(lam, dtype=complex)
    shape = lam.shape
    flat = lam.ravel()
    if data.u0 is None and data.u0_hat is None:
        return np.zeros(shape, dtype=complex)
    if data.u0_hat is not None:
        return np.asarray(data.u0_hat(lam), dtype=complex)
    u0 = data.u0
    out = np.empty(flat.shape, dtype=complex)
    far = np.abs(flat) >= _SERIES_LAM
    if far.any():
        out[far] = _transform_series(
            flat[far], lambda nodes: np.broadcast_to(u0(nodes), (int(far.sum()), nodes.size)))
    near = ~far
    if near.any():
        upper = _half_line_upper(flat[near], data, tol)
        out[near] = laplace_rows(1j * flat[near], upper, lambda rows, S: u0(S), tol)
    return out.reshape(shape)


def _check_lower(lam):
    if np.any(np.imag(lam) > 1e-12):
        raise ValueError("transform requires Im lam <= 0")


def hat_u0(lam, data, tol=DEFAULT_TOL):
    """Half-line Fourier transform of u0 at points with Im lam <= 0."""
    lam = np.asarray(lam, dtype=complex)
    _check_lower(lam)
    if data.u0 is not None and data.u0_hat is None and not check_decay_declaration(data, tol):
        warnings.warn("u0 exceeds its declared decay envelope", DecayDeclarationWarning)
    return _u0_transform(lam, data, tol)


def tilde_g0(w, t, data, tol=DEFAULT_TOL):
    """int_0^t exp(w tau) g0(tau) dtau."""
    w = np.asarray(w, dtype=complex)
    t = float(t)
    if not t > 0:
        raise ValueError("t must be positive")
    if data.g0 is None:
        return np.zeros(w.shape, dtype=complex)
    if data.g0_constant is not None:
        return data.g0_constant * t * exprel(w * t)
    g0 = data.g0
    flat = w.ravel()
    out = laplace_rows(-flat, np.full(flat.shape, t), lambda rows, S: g0(S), tol)
    return out.reshape(w.shape)


def damped_g0(w, t, data, tol=DEFAULT_TOL):
    """exp(-w t) * g0_tilde(w, t) = int_0^t exp(-w s) g0(t - s) ds, for Re w >= 0."""
    w = np.asarray(w, dtype=complex)
    t = float(t)
    if data.g0 is None:
        return np.zeros(w.shape, dtype=complex)
    if data.g0_constant is not None:
        return data.g0_constant * t * exprel(-w * t)
    g0 = data.g0
    flat = w.ravel()
    # exp(-Re(w) s) < tol * 1e-3 beyond this point
    cut = math.log(1e3 / tol)
    upper = np.minimum(t, cut / np.maximum(flat.real, 1e-300))
    out = laplace_rows(flat, upper, lambda rows, S: g0(t - S), tol)
    return out.reshape(w.shape)


def _f_transform(lam, tau, data, tol):
    lam = np.asarray(lam, dtype=complex)
    if data.f is None and data.f_hat is None:
        return np.zeros(lam.shape, dtype=complex)
    return _u0_transform(lam, data.forcing_slice(tau), tol)


def hat_f(lam, tau, data, tol=DEFAULT_TOL):
    """Half-line Fourier transform of f(., tau) at points with Im lam <= 0."""
    lam = np.asarray(lam, dtype=complex)
    _check_lower(lam)
    return _f_transform(lam, tau, data, tol)


def tilde_f(lam, w, t, data, tol=DEFAULT_TOL, *, nodes=None):
    """int_0^t exp(w tau) f_hat(lam, tau) dtau (nested quadrature).

    The tau integral uses Gauss-Legendre with doubling (16, 32, ...) until
    two levels agree to ``tol``; ``nodes`` fixes the order instead.
    """
    lam = np.asarray(lam, dtype=complex)
    _check_lower(lam)
    w = np.broadcast_to(np.asarray(w, dtype=complex), lam.shape)
    t = float(t)
    if data.f is None and data.f_hat is None:
        return np.zeros(lam.shape, dtype=complex)

    def level(n):
        x, wt = np.polynomial.legendre.leggauss(n)
        taus = 0.5 * t * (x + 1.0)
        acc = np.zeros(lam.shape, dtype=complex)
        for tau, weight in zip(taus, 0.5 * t * wt):
            acc += weight * np.exp(w * tau) * _f_transform(lam, tau, data, tol)
        return acc

    if nodes is not None:
        return level(int(nodes))
    prev = level(16)
    n = 32
    while True:
        cur = level(n)
        if np.max(np.abs(cur - prev), initial=0.0) <= tol:
            return cur
        if n >= 256:
            raise QuadratureError("f_tilde time quadrature did not converge")
        prev, n = cur, 2 * n


def _f_pairs(lam, tau, data, tol):
    """f_hat(lam_i, tau_i) for paired flat arrays (Im lam_i below the decay rate)."""
    if data.f_hat is not None:
        return np.asarray(data.f_hat(lam, tau), dtype=complex)
    f = data.f
    out = np.empty(lam.shape, dtype=complex)
    far = np.abs(lam) >= _SERIES_LAM
    if far.any():
        tf = tau[far]
        out[far] = _transform_series(
            lam[far], lambda nodes: f(np.broadcast_to(nodes, (tf.size, nodes.size)),
                                      np.broadcast_to(tf[:, None], (tf.size, nodes.size))))
    near = ~far
    if near.any():
        ln, tn = lam[near], tau[near]
        upper = _half_line_upper(ln, data, tol)
        out[near] = laplace_rows(
            1j * ln, upper, lambda rows, Y: f(Y, np.broadcast_to(tn[rows, None], Y.shape)), tol)
    return out


def _f_columns(lam, taus, data, tol):
    """Numeric f_hat(lam_i, tau_k) as an (N, m) array; one set of exponentials per lam_i."""
    f = data.f
    out = np.empty((lam.size, taus.size), dtype=complex)
    far = np.abs(lam) >= _SERIES_LAM
    if far.any():
        nodes, D = _series_fit(0.05)
        derivs = f(nodes[:, None], taus[None, :]).T @ D.T
        il = 1j * lam[far, None]
        out[far] = sum(derivs[None, :, k] / il ** (k + 1) for k in range(4))
    near = ~far
    if near.any():
        ln = lam[near]
        upper = _half_line_upper(ln, data, tol)
        out[near] = laplace_rows(1j * ln, upper, lambda rows, Y: f(Y[..., None], taus), tol,
                                 columns=taus.size)
    return out


_TIME_DEGREES = (4, 8, 16, 32, 64)


def _forcing_time_nodes(data, t, tol):
    """Chebyshev nodes in tau on [0, t] that resolve f(y, .) at probe depths y."""
    ys = np.array([0.0, 0.5, 1.0, 2.0, 4.0]) / data.decay_rate
    for m in _TIME_DEGREES:
        z = np.cos(np.pi * (np.arange(m) + 0.5) / m)
        taus = 0.5 * t * (z + 1.0)
        vals = data.f_value(ys[:, None], taus[None, :])
        coef = np.linalg.solve(np.polynomial.chebyshev.chebvander(z, m - 1), vals.T)
        tail = np.max(np.abs(coef[-2:]))
        if tail <= 1e-3 * tol * max(1.0, data.decay_constant):
            return z, taus
    raise QuadratureError("forcing is not resolved by a degree-64 Chebyshev interpolant in t")


class _TimeSlices:
    """tau -> f_hat(lam_i, tau) for a fixed set of spectral points.

    Closed-form ``f_hat`` is evaluated directly.  Otherwise f is
    interpolated in tau on Chebyshev nodes, so only one half-line
    transform per node and spectral point is needed; the tau dependence is
    then a Chebyshev series summed by Clenshaw's recurrence.
    """

    def __init__(self, lam, t, data, tol):
        self.lam = lam
        self.t = t
        self.data = data
        self.coef = None
        if data.f_hat is None:
            z, taus = _forcing_time_nodes(data, t, tol)
            F = _f_columns(lam, taus, data, tol)
            V = np.polynomial.chebyshev.chebvander(z, z.size - 1)
            self.coef = np.linalg.solve(V, F.T).T

    def __call__(self, rows, tau):
        if self.coef is None:
            lam = np.broadcast_to(self.lam[rows].reshape(-1, *([1] * (tau.ndim - 1))), tau.shape)
            return np.asarray(self.data.f_hat(lam, tau), dtype=complex)
        z = 2.0 * tau / self.t - 1.0
        c = self.coef[rows].reshape(len(rows), *([1] * (tau.ndim - 1)), -1)
        b1 = np.zeros(tau.shape, dtype=complex)
        b2 = np.zeros(tau.shape, dtype=complex)
        for k in range(c.shape[-1] - 1, 0, -1):
            b1, b2 = c[..., k] + 2.0 * z * b1 - b2, b1
        return c[..., 0] + z * b1 - b2


def damped_f(lam, w, t, data, tol=DEFAULT_TOL, *, split=False):
    """exp(-w t) f_tilde(lam, w, t) = int_0^t exp(-w s) f_hat(lam, t - s) ds, Re w >= 0.

    ``lam`` may lie anywhere below the declared decay rate (strip values
    are used by the deformed KdV contours).  With ``split`` the kernel is
    assembled as t exprel(-w t) f_hat(lam, t) plus the integral of
    exp(-w s) h(s), h(s) = f_hat(lam, t - s) - f_hat(lam, t), which is
    O(w^-2).  Where |w| >= 1e4 and exp(-Re(w) t) is negligible that
    integral is replaced by its expansion sum_k h^(k)(0) / w^(k+1),
    k = 1, 2, 3, with derivatives from a polynomial fit in s; quadrature
    there would have to resolve about |Im w| / Re w oscillations.
    """
    lam = np.asarray(lam, dtype=complex)
    w = np.broadcast_to(np.asarray(w, dtype=complex), lam.shape)
    t = float(t)
    if data.f is None and data.f_hat is None:
        return np.zeros(lam.shape, dtype=complex)
    flat_lam = lam.ravel()
    flat_w = w.ravel()
    slices = _TimeSlices(flat_lam, t, data, tol)
    every = np.arange(flat_lam.size)
    cut = math.log(1e3 / tol)
    out = np.zeros(flat_lam.shape, dtype=complex)
    final = slices(every, np.full(flat_lam.shape, t)) if split else None
    series = np.zeros(flat_lam.shape, dtype=bool)
    if split:
        series = (np.abs(flat_w) >= _SERIES_W) & (flat_w.real * t >= cut)
    if series.any():
        nodes, D = _series_fit(min(t, 0.05))
        rows = every[series]
        taus = np.broadcast_to(t - nodes, (rows.size, nodes.size))
        H = slices(rows, taus) - final[series, None]
        _, d1, d2, d3 = (H @ D.T).T
        ws = flat_w[series]
        out[series] = d1 / ws ** 2 + d2 / ws ** 3 + d3 / ws ** 4
    quad = every[~series]
    if quad.size:
        wq = flat_w[quad]
        upper = np.minimum(t, cut / np.maximum(wq.real, 1e-300))

        def func(rows, S):
            vals = slices(quad[rows], t - S)
            return vals - final[quad[rows], None] if split else vals

        out[quad] = laplace_rows(wq, upper, func, tol)
    if split:
        out = out + t * exprel(-flat_w * t) * final
    return out.reshape(lam.shape)


def duhamel(slice_value, t, tol=DEFAULT_TOL, *, max_evaluations=4000):
    """int_0^t F(tau) dtau for an expensive scalar F (Duhamel time integral).

    F(tau) is typically a zero-boundary solution started from f(., tau) and
    evaluated after the remaining time t - tau; near tau = t it has a
    corner layer.  The substitution tau = t - sigma^2 and adaptive
    Gauss-Kronrod in sigma resolve it.
    """
    t = float(t)

    def integrand(sig):
        return np.array([2.0 * s * slice_value(t - s * s) if s > 0 else 0.0 for s in sig],
                        dtype=complex)

    value, err, _, ok = gauss_kronrod(integrand, 0.0, math.sqrt(t), tol, initial_pieces=2,
                                      max_evaluations=max_evaluations)
    if not ok:
        raise QuadratureError(f"Duhamel time integral did not reach tol={tol:g} (estimate {err:.3g})")
    return value
