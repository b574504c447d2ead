"""Sampled diagnostics for candidate solutions of the quarter-plane problems.

The battery checks a candidate V(x, t) against

* the PDE, by central finite differences (heat: V_t - V_xx - f,
  linear KdV: V_t + V_xxx - f);
* its claimed data, through traces at decreasing offsets from x = 0 and
  t = 0;
* the corner compatibility conditions of the data, exactly;
* decay for large x;
* uniform L^2 integrability near t = 0, through the exponent p of a
  power-law fit int_0^inf V^2 dx ~ t^p (p < 0 means no t-independent
  integrable envelope can exist).

None of these proves anything; they refute or support.
"""

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate as sp_integrate

from .transforms import HalfLineData

__all__ = [
    "CandidateSolution",
    "CompatFlag",
    "MissingDerivativeError",
    "TraceReport",
    "IntegrabilityFit",
    "DecayRecord",
    "VerifyConfig",
    "VerificationReport",
    "residual",
    "boundary_traces",
    "check_compatibility",
    "integrability_exponent",
    "half_line_l2",
    "decay_probes",
    "run_battery",
]

EQUATIONS = ("heat", "kdv")
CORNER_CLEARANCE = 1e-4


class MissingDerivativeError(ValueError):
    """Data lack the derivative callables a compatibility condition needs."""


@dataclass(frozen=True)
class CandidateSolution:
    """A function V(x, t) claimed to solve ``equation`` with ``claimed_data``.

    ``evaluator`` takes scalars unless ``vectorized`` is set, in which case
    it must accept broadcastable arrays.
    """

    evaluator: Callable
    equation: str
    claimed_data: HalfLineData = field(default_factory=HalfLineData.zero)
    name: str = "candidate"
    vectorized: bool = False

    def __post_init__(self):
        if self.equation not in EQUATIONS:
            raise ValueError(f"equation must be one of {EQUATIONS}")

    def __call__(self, x, t):
        x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
        if self.vectorized:
            return np.asarray(self.evaluator(x, t), dtype=float) + np.zeros(x.shape)
        out = np.empty(x.shape)
        for i in np.ndindex(x.shape):
            out[i] = float(self.evaluator(float(x[i]), float(t[i])))
        return out


# ---------------------------------------------------------------------------
# PDE residual

# fourth-order central stencil for f''' at offsets -3..3 (times 1 / 8h^3)
_D3 = np.array([1.0, -8.0, 13.0, 0.0, -13.0, 8.0, -1.0])


def _residual_field(c, X, T, h, h3):
    f = c.claimed_data.f_value(X, T)
    ut = (c(X, T + h) - c(X, T - h)) / (2.0 * h)
    if c.equation == "heat":
        uxx = (c(X + h, T) - 2.0 * c(X, T) + c(X - h, T)) / (h * h)
        return ut - uxx - f
    uxxx = sum(w * c(X + k * h3, T) for k, w in zip(range(-3, 4), _D3) if w) / (8.0 * h3 ** 3)
    return ut + uxxx - f


def residual(c, h=1e-3, grid=None, *, h3=5e-3, full_output=False):
    """sup over ``grid`` = (xs, ts) of the finite-difference PDE residual.

    Time derivatives and V_xx use second-order central differences with
    step ``h``; V_xxx (KdV) uses the fourth-order seven-point stencil with
    step ``h3``.  Every stencil point must stay 4 steps away from the
    boundary.
    """
    xs, ts = grid if grid is not None else (np.geomspace(0.25, 8.0, 8), np.geomspace(0.5, 5.0, 6))
    X, T = np.meshgrid(np.asarray(xs, float), np.asarray(ts, float), indexing="ij")
    reach = 4.0 * max(h, h3 if c.equation == "kdv" else h)
    if X.min() < reach or T.min() < 4.0 * h:
        raise ValueError("residual grid must keep a margin of 4 steps from the boundary")
    R = np.abs(_residual_field(c, X, T, h, h3))
    sup = float(np.max(R)) if R.size else 0.0
    if full_output:
        i = np.unravel_index(int(np.argmax(R)), R.shape)
        scale = float(np.max(np.abs(c(X, T)))) if R.size else 0.0
        return sup, {"x": float(X[i]), "t": float(T[i]), "field": R, "scale": scale}
    return sup


# ---------------------------------------------------------------------------
# boundary traces


@dataclass(frozen=True)
class TraceReport:
    offsets: tuple
    sup_x0: tuple
    sup_t0: tuple
    monotone: bool

    @property
    def trace_sup_x0(self):
        return self.sup_x0[-1]

    @property
    def trace_sup_t0(self):
        return self.sup_t0[-1]


def _nonincreasing(values, slack=1e-12):
    v = np.asarray(values, dtype=float)
    return bool(np.all(v[1:] <= v[:-1] * (1 + 1e-6) + slack))


def boundary_traces(c, offsets=(1e-2, 1e-3, 1e-4), data=None, *, t_probes=None,
                    x_probes=None):
    """Per-offset sup |V(offset, t) - g0(t)| over t and sup |V(x, offset) - u0(x)| over x."""
    offsets = tuple(float(o) for o in offsets)
    if any(o <= 0 for o in offsets) or any(b >= a for a, b in zip(offsets, offsets[1:])):
        raise ValueError("offsets must be positive and decreasing")
    if min(offsets) < CORNER_CLEARANCE:
        raise ValueError(f"offsets below {CORNER_CLEARANCE:g} approach the corner")
    data = c.claimed_data if data is None else data
    ts = np.geomspace(0.1, 10.0, 8) if t_probes is None else np.asarray(t_probes, float)
    xs = np.geomspace(0.1, 10.0, 8) if x_probes is None else np.asarray(x_probes, float)
    sx, st = [], []
    for o in offsets:
        sx.append(float(np.max(np.abs(c(np.full(ts.shape, o), ts) - data.g0_value(ts)))))
        st.append(float(np.max(np.abs(c(xs, np.full(xs.shape, o)) - data.u0_value(xs)))))
    return TraceReport(offsets, tuple(sx), tuple(st), _nonincreasing(sx) and _nonincreasing(st))


# ---------------------------------------------------------------------------
# corner compatibility


@dataclass(frozen=True)
class CompatFlag:
    name: str
    passed: bool
    residual: float


def _at0(fn):
    return float(np.asarray(fn(np.array([0.0])), dtype=float).ravel()[0])


def _u0_derivative(data, k):
    if data.u0 is None and data.u0_hat is None:
        return 0.0
    if len(data.u0_derivatives) < k:
        raise MissingDerivativeError(f"u0 needs derivative of order {k} at 0")
    return _at0(data.u0_derivatives[k - 1])


def _g0_derivative(data):
    if data.g0 is None:
        return 0.0
    if not data.g0_derivatives:
        raise MissingDerivativeError("g0 needs its first derivative at 0")
    return _at0(data.g0_derivatives[0])


def check_compatibility(data, equation, threshold=1e-10):
    """Corner conditions of the data.

    Both equations: u0(0) = g0(0).  Heat: u0''(0) + f(0, 0) = g0'(0).
    KdV: g0'(0) = -u0'''(0) + f(0, 0).  Residuals are signed
    (left minus right as written).
    """
    if equation not in EQUATIONS:
        raise ValueError(f"equation must be one of {EQUATIONS}")
    u00 = _at0(data.u0_value)
    g00 = _at0(data.g0_value)
    f00 = float(data.f_value(0.0, 0.0))
    if equation == "heat":
        second = ("u0''(0)+f(0,0)=g0'(0)", _u0_derivative(data, 2) + f00 - _g0_derivative(data))
    else:
        second = ("g0'(0)=-u0'''(0)+f(0,0)", _g0_derivative(data) + _u0_derivative(data, 3) - f00)
    out = []
    for name, r in (("u0(0)=g0(0)", u00 - g00), second):
        out.append(CompatFlag(name, bool(abs(r) <= threshold), float(r)))
    return out


# ---------------------------------------------------------------------------
# uniform L^2 integrability


@dataclass(frozen=True)
class IntegrabilityFit:
    p: Optional[float]
    fit_error: Optional[float]
    t_samples: tuple
    integrals: tuple
    degenerate: bool = False
    divergent: bool = False

    @property
    def violation(self):
        return self.divergent or (self.p is not None and self.p < -0.1)


def half_line_l2(fun, *, x_quadrature=None, start=1.0, max_length=1e3, rel=1e-10):
    """int_0^inf fun(x)^2 dx; returns (value, divergent).

    The half-line is covered by doubling intervals [L, 2L] until a block
    contributes less than ``rel`` of the total.  ``x_quadrature=None``
    uses adaptive quadrature on each block, an integer N uses an N-point
    Gauss-Legendre rule (for expensive evaluators).
    """
    if x_quadrature is None:
        def block(a, b):
            return sp_integrate.quad(lambda x: float(fun(x)) ** 2, a, b, limit=200,
                                     epsabs=0.0, epsrel=1e-12)[0]
    else:
        nodes, weights = np.polynomial.legendre.leggauss(int(x_quadrature))

        def block(a, b):
            xs = a + 0.5 * (b - a) * (nodes + 1.0)
            vals = np.array([float(fun(x)) for x in xs])
            return 0.5 * (b - a) * float(weights @ vals ** 2)
    total = block(0.0, start)
    a = start
    while a < max_length:
        piece = block(a, 2.0 * a)
        total += piece
        a *= 2.0
        if piece <= rel * total or (total == 0.0 and a >= 4 * start):
            return total, False
    return total, True


def integrability_exponent(c, T=1.0, t_samples=None, x_quadrature=None, *,
                           derivative=False, dt=None):
    """Fit log int_0^inf V^2 dx = p log t + const over ``t_samples`` in (0, T].

    With ``derivative`` the same is done for V_t (central difference with
    relative step ``dt``, default 1e-4 t).  Returns :class:`IntegrabilityFit`;
    an identically zero candidate is reported as degenerate.
    """
    ts = (np.geomspace(T / 16.0, T, 5) if t_samples is None
          else np.asarray(t_samples, dtype=float))
    if ts.size < 4 or np.any(ts <= 0) or np.any(ts > T):
        raise ValueError("need >= 4 samples in (0, T]")
    values = []
    divergent = False
    for t in ts:
        if derivative:
            h = (1e-4 if dt is None else dt) * t

            def fun(x, t=t, h=h):
                return (c(x, t + h) - c(x, t - h)) / (2.0 * h)
        else:
            def fun(x, t=t):
                return c(x, t)
        I, div = half_line_l2(fun, x_quadrature=x_quadrature)
        values.append(I)
        divergent |= div
    values = np.array(values)
    if divergent:
        return IntegrabilityFit(None, None, tuple(ts), tuple(values), divergent=True)
    if np.all(values <= 1e-300):
        return IntegrabilityFit(None, None, tuple(ts), tuple(values), degenerate=True)
    logs = np.log(np.maximum(values, 1e-300))
    A = np.vstack([np.log(ts), np.ones_like(ts)]).T
    coef, *_ = np.linalg.lstsq(A, logs, rcond=None)
    fit_error = float(np.max(np.abs(A @ coef - logs)))
    return IntegrabilityFit(float(coef[0]), fit_error, tuple(ts), tuple(values))


# ---------------------------------------------------------------------------
# decay at large x


@dataclass(frozen=True)
class DecayRecord:
    x: tuple
    t: tuple
    V: tuple
    V_x: tuple
    V_xx: Optional[tuple]
    decaying: bool


def decay_probes(c, x_list=(1.0, 2.0, 5.0, 10.0, 20.0), t_list=(0.5, 1.0, 2.0), *,
                 h=1e-3, decay_tol=1e-6):
    """|V|, |V_x| (and |V_xx| for KdV) on x_list x t_list.

    ``decaying`` requires |V| to be nonincreasing along the tail of
    ``x_list`` and below ``decay_tol`` at its last point, for every t.
    """
    xs = np.asarray(x_list, dtype=float)
    ts = np.asarray(t_list, dtype=float)
    if np.any(np.diff(xs) <= 0) or xs[-1] < 20:
        raise ValueError("x_list must increase and reach at least 20")
    X, T = np.meshgrid(xs, ts, indexing="ij")
    V = c(X, T)
    Vp, Vm = c(X + h, T), c(X - h, T)
    Vx = np.abs(Vp - Vm) / (2 * h)
    Vxx = np.abs(Vp - 2 * V + Vm) / (h * h) if c.equation == "kdv" else None
    aV = np.abs(V)
    ok = all(_nonincreasing(aV[len(xs) // 2:, j], slack=1e-14) for j in range(len(ts)))
    ok = ok and bool(np.all(aV[-1] <= decay_tol))
    ok = ok and bool(np.all(np.isfinite(Vx)))

    def tup(a):
        return tuple(map(tuple, a.tolist()))

    return DecayRecord(tuple(xs), tuple(ts), tup(aV), tup(Vx),
                       None if Vxx is None else tup(Vxx), ok)


# ---------------------------------------------------------------------------
# full battery


@dataclass(frozen=True)
class VerifyConfig:
    """Probe layout and thresholds of :func:`run_battery`.

    The residual clause passes when the sup residual is at most
    ``residual_tol * max(1, max |V| on the residual grid)``: finite
    difference truncation error scales with the solution.
    """

    h: float = 1e-3
    h3: float = 5e-3
    residual_x: tuple = tuple(np.geomspace(0.25, 8.0, 8))
    residual_t: tuple = tuple(np.geomspace(0.5, 5.0, 6))
    residual_tol: float = 1e-5
    offsets: tuple = (1e-2, 1e-3, 1e-4)
    trace_t: tuple = tuple(np.geomspace(0.1, 2.0, 6))
    trace_x: tuple = tuple(np.geomspace(0.1, 2.0, 6))
    trace_tol: float = 1e-3
    compat_threshold: float = 1e-10
    decay_x: tuple = (1.0, 2.0, 5.0, 10.0, 20.0)
    decay_t: tuple = (0.5, 1.0, 2.0)
    decay_tol: float = 1e-6
    l2_T: float = 1.0
    l2_t_samples: Optional[tuple] = None
    l2_x_quadrature: Optional[int] = None
    l2_time_derivative: bool = True


@dataclass
class VerificationReport:
    candidate: str
    equation: str
    residual_sup: float
    residual_at: dict
    traces: TraceReport
    compat_flags: list
    decay: DecayRecord
    l2_exponent_fit: IntegrabilityFit
    l2_exponent_fit_t: Optional[IntegrabilityFit]
    config: VerifyConfig
    max_abs: Optional[float] = None
    clauses: dict = field(default_factory=dict)

    @property
    def trace_sup_x0(self):
        return self.traces.trace_sup_x0

    @property
    def trace_sup_t0(self):
        return self.traces.trace_sup_t0

    @property
    def envelope_violation(self):
        fits = [self.l2_exponent_fit, self.l2_exponent_fit_t]
        return any(f is not None and f.violation for f in fits)

    @property
    def all_pass(self):
        return all(self.clauses.values())

    def to_dict(self):
        d = {
            "candidate": self.candidate,
            "equation": self.equation,
            "residual_sup": self.residual_sup,
            "residual_at": self.residual_at,
            "trace_sup_x0": self.trace_sup_x0,
            "trace_sup_t0": self.trace_sup_t0,
            "traces": asdict(self.traces),
            "compat_flags": [asdict(f) for f in self.compat_flags],
            "decay_probes": asdict(self.decay),
            "l2_exponent_fit": asdict(self.l2_exponent_fit),
            "l2_exponent_fit_t": (None if self.l2_exponent_fit_t is None
                                  else asdict(self.l2_exponent_fit_t)),
            "envelope_violation": self.envelope_violation,
            "max_abs": self.max_abs,
            "clauses": dict(self.clauses),
            "all_pass": self.all_pass,
            "config": asdict(self.config),
        }
        return _jsonable(d)

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, **kwargs)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def run_battery(c, config=None, *, max_abs=None):
    """All checks on ``c``; ``clauses`` maps each check to pass/fail."""
    cfg = VerifyConfig() if config is None else config
    res, where = residual(c, cfg.h, (cfg.residual_x, cfg.residual_t), h3=cfg.h3,
                          full_output=True)
    traces = boundary_traces(c, cfg.offsets, t_probes=cfg.trace_t, x_probes=cfg.trace_x)
    try:
        compat = check_compatibility(c.claimed_data, c.equation, cfg.compat_threshold)
    except MissingDerivativeError as exc:
        compat = [CompatFlag(f"missing derivatives: {exc}", False, float("nan"))]
    decay = decay_probes(c, cfg.decay_x, cfg.decay_t, h=cfg.h, decay_tol=cfg.decay_tol)
    fit = integrability_exponent(c, cfg.l2_T, cfg.l2_t_samples, cfg.l2_x_quadrature)
    fit_t = None
    if cfg.l2_time_derivative:
        fit_t = integrability_exponent(c, cfg.l2_T, cfg.l2_t_samples, cfg.l2_x_quadrature,
                                       derivative=True)
    report = VerificationReport(
        c.name, c.equation, res,
        {"x": where["x"], "t": where["t"], "max_abs_V": where["scale"]},
        traces, compat, decay, fit, fit_t, cfg, max_abs)
    report.clauses = {
        "residual": res <= cfg.residual_tol * max(1.0, where["scale"]),
        "trace_x0": traces.trace_sup_x0 <= cfg.trace_tol,
        "trace_t0": traces.trace_sup_t0 <= cfg.trace_tol,
        "trace_trend": traces.monotone,
        "compatibility": all(f.passed for f in compat),
        "decay": decay.decaying,
        "integrability": not report.envelope_violation,
    }
    return report
