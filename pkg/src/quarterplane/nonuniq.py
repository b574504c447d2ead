"""Non-uniqueness witnesses: time derivatives of boundary-step solutions.

The boundary step (u0 = 0, g0 = 1, f = 0) is incompatible at the corner.
Its solution v has v(0, t) = 1 and v(x, 0) = 0 for every t > 0, x > 0, so
each time derivative u_n = d^n v / dt^n (n >= 1) has zero initial and zero
boundary values and still solves the equation (for KdV the family is
normalised as 3 d^n v / dt^n, which changes nothing).  Together with the zero
solution these are infinitely many solutions of the zero-data problem.
They are excluded by the uniqueness theorems only through the uniform
L^2 integrability hypothesis near t = 0, which the certificate reports.
"""

import json
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from . import heat, kdv
from .transforms import HalfLineData
from .verify import CandidateSolution, VerificationReport, VerifyConfig, run_battery

__all__ = [
    "ProbeConfig",
    "Witness",
    "CertificationError",
    "generate",
    "certify",
    "witness_evaluator",
    "explain",
    "CAPS",
]

CAPS = {"heat": heat.N_CAP, "kdv": kdv.N_CAP}
KDV_WITNESS_TOL = 1e-12


@dataclass(frozen=True)
class ProbeConfig:
    """Probe layout for certification.

    ``grid_x`` x ``grid_t`` is scanned for the nonvanishing check.  The
    PDE residual and traces are sampled at moderate times: as t -> 0 a
    witness grows like t^(-n) and finite differences lose their meaning,
    while the traces have to be compared against an absolute tolerance.
    """

    grid_x: tuple = tuple(np.geomspace(1e-3, 20.0, 25))
    grid_t: tuple = tuple(np.geomspace(1e-3, 10.0, 25))
    offsets: tuple = (1e-2, 1e-3, 1e-4)
    trace_t: tuple = tuple(np.geomspace(3.0, 10.0, 6))
    trace_x: tuple = tuple(np.geomspace(2.0, 10.0, 6))
    residual_x: tuple = tuple(np.geomspace(0.25, 10.0, 8))
    residual_t: tuple = tuple(np.geomspace(3.0, 10.0, 4))
    h: float = 1e-3
    h3: float = 5e-3
    residual_tol: float = 1e-5
    trace_tol: float = 1e-4
    nonvanish: float = 1e-2
    l2_T: float = 1.0
    l2_x_quadrature: int = 32

    def verify_config(self):
        return VerifyConfig(
            h=self.h, h3=self.h3, residual_x=self.residual_x, residual_t=self.residual_t,
            residual_tol=self.residual_tol, offsets=self.offsets, trace_t=self.trace_t,
            trace_x=self.trace_x, trace_tol=self.trace_tol, l2_T=self.l2_T,
            l2_x_quadrature=self.l2_x_quadrature)


class CertificationError(RuntimeError):
    """A witness failed one of its certificate clauses."""

    def __init__(self, clause, report):
        self.clause = clause
        self.report = report
        super().__init__(f"certification failed: clause {clause!r}")


@dataclass
class Witness:
    equation: str
    n: int
    evaluator: Callable = field(repr=False)
    certificate: VerificationReport = field(repr=False)
    max_abs: float = 0.0
    max_at: tuple = ()
    max_abs_t1: float = 0.0
    argmax_t1: float = 0.0

    def __call__(self, x, t):
        return self.evaluator(x, t)


def witness_evaluator(equation, n):
    """(evaluator, vectorized) for u_n of the given equation."""
    if equation == "heat":
        return (lambda x, t: heat.heat_un(n, x, t, "closed_form")), True
    if equation == "kdv":
        return (lambda x, t: kdv.kdv_un(n, x, t, tol=KDV_WITNESS_TOL)), False
    raise ValueError("equation must be 'heat' or 'kdv'")


_CERT_CLAUSES = ("residual", "trace_x0", "trace_t0", "trace_trend")


def certify(candidate, config=None, n=0):
    """Run the battery on a zero-data candidate and build a :class:`Witness`.

    Raises :class:`CertificationError` naming the first failed clause
    among residual, traces and nonvanishing.  The integrability clause is
    reported but expected to fail: that is what lets a witness exist.
    """
    cfg = ProbeConfig() if config is None else config
    X, T = np.meshgrid(np.asarray(cfg.grid_x), np.asarray(cfg.grid_t), indexing="ij")
    vals = np.abs(candidate(X, T))
    i = np.unravel_index(int(np.argmax(vals)), vals.shape)
    max_abs = float(vals[i])
    report = run_battery(candidate, cfg.verify_config(), max_abs=max_abs)
    report.clauses["nonvanishing"] = max_abs > cfg.nonvanish
    for clause in _CERT_CLAUSES + ("nonvanishing",):
        if not report.clauses[clause]:
            raise CertificationError(clause, report)
    res = minimize_scalar(lambda x: -abs(float(candidate(x, 1.0))),
                          bounds=(float(cfg.grid_x[0]), float(cfg.grid_x[-1])),
                          method="bounded", options={"xatol": 1e-10})
    return Witness(candidate.equation, n, candidate.evaluator, report, max_abs,
                   (float(X[i]), float(T[i])), float(-res.fun), float(res.x))


def generate(equation, n, config=None):
    """Certified witness u_n for ``equation`` ("heat" or "kdv")."""
    if equation not in CAPS:
        raise ValueError("equation must be 'heat' or 'kdv'")
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer (n = 0 is the step solution itself, "
                         "whose boundary datum is 1)")
    if n > CAPS[equation]:
        raise ValueError(f"n = {n} exceeds the cap {CAPS[equation]} for {equation}")
    n = int(n)
    fn, vec = witness_evaluator(equation, n)
    cand = CandidateSolution(fn, equation, HalfLineData.zero(), f"{equation}_u{n}", vec)
    return certify(cand, config, n)


def explain(witness):
    """Plain-text report and a JSON-ready dict for a certified witness."""
    rep = witness.certificate
    fit = rep.l2_exponent_fit
    fit_t = rep.l2_exponent_fit_t
    d = {
        "equation": witness.equation,
        "n": witness.n,
        "solves_zero_data_problem": True,
        "residual_sup": rep.residual_sup,
        "trace_sup_x0": rep.trace_sup_x0,
        "trace_sup_t0": rep.trace_sup_t0,
        "max_abs": witness.max_abs,
        "max_at": list(witness.max_at),
        "max_abs_t1": witness.max_abs_t1,
        "argmax_t1": witness.argmax_t1,
        "l2_exponent": fit.p,
        "l2_exponent_fit_error": fit.fit_error,
        "l2_exponent_time_derivative": None if fit_t is None else fit_t.p,
        "violated_hypothesis": ("uniform L2 integrability near t = 0" if rep.envelope_violation
                                else None),
        "other_hypotheses_hold": all(v for k, v in rep.clauses.items() if k != "integrability"),
    }
    eq = "u_t = u_xx" if witness.equation == "heat" else "u_t + u_xxx = 0"
    lines = [
        f"{witness.equation} witness u_{witness.n}: solves {eq} with u(x,0) = 0, u(0,t) = 0",
        f"  PDE residual (finite differences)  {rep.residual_sup:.3e}",
        f"  boundary trace at x = {rep.traces.offsets[-1]:g}         {rep.trace_sup_x0:.3e}",
        f"  initial trace at t = {rep.traces.offsets[-1]:g}          {rep.trace_sup_t0:.3e}",
        f"  max |u| on probe grid              {witness.max_abs:.6g} at (x, t) = "
        f"({witness.max_at[0]:.4g}, {witness.max_at[1]:.4g})",
        f"  max |u(., 1)|                      {witness.max_abs_t1:.10g} at x = "
        f"{witness.argmax_t1:.10g}",
    ]
    if fit.p is not None:
        lines.append(f"  int_0^inf u^2 dx ~ t^p             p = {fit.p:.4f} "
                     f"(fit error {fit.fit_error:.1e})")
    if fit_t is not None and fit_t.p is not None:
        lines.append(f"  int_0^inf u_t^2 dx ~ t^p           p = {fit_t.p:.4f}")
    if rep.envelope_violation:
        lines.append("  p < 0: no t-independent integrable bound B_T(x) >= u^2 exists for "
                     "0 < t <= T,")
        lines.append("  so the uniform L2 integrability hypothesis of the uniqueness theorems "
                     "fails;")
        lines.append("  it is the only hypothesis this nonzero solution violates.")
    return "\n".join(lines), json.loads(json.dumps(d))


def with_overrides(config, **kwargs):
    return replace(ProbeConfig() if config is None else config, **kwargs)
